#pragma once

// Discounted-utility one-switch analysis: discount families, switch-point
// solving, impatience classification, mixture operations and brute-force
// verification oracles.

#include "oneswitch/core.hpp"
#include "oneswitch/discount.hpp"
#include "oneswitch/du.hpp"
#include "oneswitch/errors.hpp"
#include "oneswitch/mixture.hpp"
#include "oneswitch/plot_data.hpp"
#include "oneswitch/verify.hpp"
