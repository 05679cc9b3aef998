#pragma once

#include <cstdio>
#include <ostream>

#include "oneswitch/discount.hpp"

namespace oneswitch {

// Bundled discount/rate comparison fixtures: one curve per impatience regime.
inline const LinearTimesExponential kPlotLinExp{0.01, 0.03};
inline const Exponential kPlotExp{0.03};
inline const SumOfExponentials kPlotSumExpA05{0.5, 0.03, 0.05};
inline const SumOfExponentials kPlotSumExpA12{1.2, 0.03, 0.05};

/// CSV with t from 0 to 200 in steps of 0.5, discount values and time
/// preference rates of the four fixture curves. Full double precision so
/// downstream plots reproduce bit-for-bit.
inline void write_plot_csv(std::ostream& out) {
    out << "t,D_linexp,D_exp,D_sumexp_a05,D_sumexp_a12,"
           "rate_linexp,rate_exp,rate_sumexp_a05,rate_sumexp_a12\n";
    char buffer[64];
    const auto field = [&](double v, char sep) {
        std::snprintf(buffer, sizeof buffer, "%.17g%c", v, sep);
        out << buffer;
    };
    for (int k = 0; k <= 400; ++k) {
        const double t = 0.5 * k;
        field(t, ',');
        field(evaluate_at(kPlotLinExp, t), ',');
        field(evaluate_at(kPlotExp, t), ',');
        field(evaluate_at(kPlotSumExpA05, t), ',');
        field(evaluate_at(kPlotSumExpA12, t), ',');
        field(rate_at(kPlotLinExp, t), ',');
        field(rate_at(kPlotExp, t), ',');
        field(rate_at(kPlotSumExpA05, t), ',');
        field(rate_at(kPlotSumExpA12, t), '\n');
    }
}

}  // namespace oneswitch
