#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "oneswitch/core.hpp"
#include "oneswitch/discount.hpp"
#include "oneswitch/du.hpp"
#include "oneswitch/errors.hpp"
#include "oneswitch/mixture.hpp"

namespace oneswitch {

struct ZeroSwitch {};
struct OneSwitch {
    double sigma_star;
};
struct WeakOneSwitch {
    double zero_lo;
    double zero_hi;
};
struct Violation {
    DatedSequence seq_a;
    DatedSequence seq_b;
    std::vector<double> crossings;
};

using OneSwitchVerdict = std::variant<ZeroSwitch, OneSwitch, WeakOneSwitch, Violation>;

inline const char* one_switch_verdict_name(const OneSwitchVerdict& v) noexcept {
    switch (v.index()) {
        case 0: return "zero_switch";
        case 1: return "one_switch";
        case 2: return "weak_one_switch";
        case 3: return "violation";
    }
    return "unknown";
}

/// Wraps the numeric scan and classifies its crossing structure against the
/// one-switch taxonomy. A single reversal that passes through a zero run of
/// two or more grid points is read as a weak one-switch indifference interval.
inline OneSwitchVerdict one_switch_oracle(const PreferenceModel& model, const DatedSequence& seq_a,
                                          const DatedSequence& seq_b, double sigma_max = kDefaultSigmaMax,
                                          int grid_points = kDefaultGridPoints) {
    const SwitchAnalysis analysis = switch_numeric(model, seq_a, seq_b, sigma_max, grid_points);
    if (analysis.crossings.size() >= 2) {
        std::vector<double> sigmas;
        for (const Crossing& c : analysis.crossings) sigmas.push_back(c.sigma);
        return Violation{seq_a, seq_b, std::move(sigmas)};
    }
    if (analysis.crossings.size() == 1) {
        const Crossing& crossing = analysis.crossings.front();
        if (crossing.zero_points_spanned >= 2) return WeakOneSwitch{crossing.zero_lo, crossing.zero_hi};
        return OneSwitch{crossing.sigma};
    }
    return ZeroSwitch{};
}

struct ZeroSetCheck {
    bool contiguous;
    /// [lo, hi] of the zero set when non-empty.
    std::optional<std::pair<double, double>> interval;
    struct Gap {
        double zero_before;
        double nonzero_between;
        double zero_after;
    };
    std::optional<Gap> gap;
};

/// True iff {sigma : |delta(sigma)| <= zero_tol} sampled on the grid is one
/// contiguous run (possibly empty). Generic over the delta callable so that
/// engineered non-DU controls can be checked with the same machinery.
template <class DeltaFn>
ZeroSetCheck zero_set_interval_check(DeltaFn&& delta_fn, double zero_tol, double sigma_max, int grid_points) {
    if (!(sigma_max > 0.0) || grid_points < 2)
        throw DomainError(Errc::ParamOutOfRange, "zero_set_interval_check requires sigma_max > 0 and grid_points >= 2");
    const double step = sigma_max / static_cast<double>(grid_points - 1);
    ZeroSetCheck check{true, std::nullopt, std::nullopt};
    bool in_zero = false;
    bool closed_run = false;
    double last_nonzero_after_run = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double sigma = step * k;
        const bool zero = std::abs(delta_fn(sigma)) <= zero_tol;
        if (zero) {
            if (closed_run && check.contiguous) {
                check.contiguous = false;
                check.gap = ZeroSetCheck::Gap{check.interval->second, last_nonzero_after_run, sigma};
            }
            if (!check.interval)
                check.interval = std::make_pair(sigma, sigma);
            else
                check.interval->second = sigma;
            in_zero = true;
        } else {
            if (in_zero) closed_run = true;
            if (closed_run) last_nonzero_after_run = sigma;
            in_zero = false;
        }
    }
    return check;
}

inline ZeroSetCheck zero_set_interval_check(const PreferenceModel& model, const DatedSequence& seq_a,
                                            const DatedSequence& seq_b, double sigma_max = kDefaultSigmaMax,
                                            int grid_points = kDefaultGridPoints) {
    const detail::DeltaTerms terms = detail::DeltaTerms::make(model, seq_a, seq_b);
    const double zero_tol = 1e-11 * (1.0 + terms.max_term(model.discount));
    return std::visit(
        [&](const auto& fam) {
            return zero_set_interval_check([&](double sigma) { return detail::delta_point(fam, terms, sigma); },
                                           zero_tol, sigma_max, grid_points);
        },
        model.discount.family());
}

/// Classifies impatience from the ratio condition alone: over all sampled
/// t < s and sigma > 0, compare D(t)/D(t+sigma) with D(s)/D(s+sigma).
/// Independent of the closed-form parameter rules.
inline ImpatienceClass impatience_oracle(const DiscountFunction& discount, std::span<const double> t_samples,
                                         std::span<const double> sigma_samples) {
    bool any_di = false, any_ii = false;
    NumericWitness di_witness{0, 0, 0}, ii_witness{0, 0, 0}, eq_witness{0, 0, 0};
    double best_di = 0.0, best_ii = 0.0;
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        for (std::size_t j = 0; j < t_samples.size(); ++j) {
            const double t = t_samples[i];
            const double s = t_samples[j];
            if (!(t < s)) continue;
            for (double sigma : sigma_samples) {
                if (!(sigma > 0.0)) continue;
                const double lhs = discount.evaluate(t) / discount.evaluate(t + sigma);
                const double rhs = discount.evaluate(s) / discount.evaluate(s + sigma);
                const double tol = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
                const double diff = lhs - rhs;
                if (std::abs(diff) <= tol) {
                    eq_witness = NumericWitness{t, s, sigma};
                } else if (diff > 0.0) {
                    any_di = true;
                    if (diff > best_di) {
                        best_di = diff;
                        di_witness = NumericWitness{t, s, sigma};
                    }
                } else {
                    any_ii = true;
                    if (-diff > best_ii) {
                        best_ii = -diff;
                        ii_witness = NumericWitness{t, s, sigma};
                    }
                }
            }
        }
    }
    if (any_di && any_ii) {
        // Report the weaker direction: re-checking it against the dominant
        // one exhibits the non-monotonicity.
        return {Impatience::NonMonotone, best_di < best_ii ? di_witness : ii_witness};
    }
    if (any_di) return {Impatience::StrictlyDI, di_witness};
    if (any_ii) return {Impatience::StrictlyII, ii_witness};
    return {Impatience::Stationary, eq_witness};
}

enum class LogShape { LogConvex, LogConcave, LogLinear, Neither };

inline const char* log_shape_name(LogShape s) noexcept {
    switch (s) {
        case LogShape::LogConvex: return "log_convex";
        case LogShape::LogConcave: return "log_concave";
        case LogShape::LogLinear: return "log_linear";
        case LogShape::Neither: return "neither";
    }
    return "unknown";
}

struct LogShapeResult {
    LogShape shape;
    double min_second_diff;
    double max_second_diff;
    /// Grid times with conflicting curvature signs; set only for Neither.
    std::optional<std::pair<double, double>> witness;
};

/// Sign pattern of second central differences of ln D on a uniform grid.
/// Strictness threshold 1e-13 on the second difference.
inline LogShapeResult log_concavity_oracle(const DiscountFunction& discount, double t_lo, double t_hi,
                                           int points = 128) {
    if (points < 64) throw DomainError(Errc::ParamOutOfRange, "log_concavity_oracle requires >= 64 grid points");
    if (!(t_lo >= 0.0) || !(t_hi > t_lo))
        throw DomainError(Errc::ParamOutOfRange, "log_concavity_oracle requires 0 <= t_lo < t_hi");
    constexpr double kStrict = 1e-13;
    const double h = (t_hi - t_lo) / static_cast<double>(points - 1);
    std::vector<double> log_d(points);
    for (int k = 0; k < points; ++k) log_d[k] = std::log(discount.evaluate(t_lo + h * k));

    LogShapeResult result{LogShape::LogLinear, 0.0, 0.0, std::nullopt};
    double convex_at = -1.0, concave_at = -1.0;
    bool first = true;
    for (int k = 1; k + 1 < points; ++k) {
        const double d2 = log_d[k + 1] - 2.0 * log_d[k] + log_d[k - 1];
        if (first) {
            result.min_second_diff = result.max_second_diff = d2;
            first = false;
        } else {
            result.min_second_diff = std::min(result.min_second_diff, d2);
            result.max_second_diff = std::max(result.max_second_diff, d2);
        }
        if (d2 > kStrict && convex_at < 0.0) convex_at = t_lo + h * k;
        if (d2 < -kStrict && concave_at < 0.0) concave_at = t_lo + h * k;
    }
    const bool has_convex = convex_at >= 0.0;
    const bool has_concave = concave_at >= 0.0;
    if (has_convex && has_concave) {
        result.shape = LogShape::Neither;
        result.witness = std::make_pair(convex_at, concave_at);
    } else if (has_convex) {
        result.shape = LogShape::LogConvex;
    } else if (has_concave) {
        result.shape = LogShape::LogConcave;
    } else {
        result.shape = LogShape::LogLinear;
    }
    return result;
}

/// Translates the Prop. 4 dictionary between impatience and log-shape.
inline Impatience impatience_of_log_shape(LogShape shape) noexcept {
    switch (shape) {
        case LogShape::LogConvex: return Impatience::StrictlyDI;
        case LogShape::LogConcave: return Impatience::StrictlyII;
        case LogShape::LogLinear: return Impatience::Stationary;
        case LogShape::Neither: return Impatience::NonMonotone;
    }
    return Impatience::NonMonotone;
}

/// Positive utility levels making ((alpha, beta), (0, 2 sigma)) indifferent to
/// ((gamma), (sigma)) at delays 0 and sigma:
///   u_alpha + u_beta D(2 sigma) = u_gamma D(sigma)
///   u_alpha D(sigma) + u_beta D(3 sigma) = u_gamma D(2 sigma)
struct IndifferenceTriple {
    double u_alpha;
    double u_beta;
    double u_gamma;
    double sigma;
};

inline long double evaluate_at_ld_any(const DiscountFunction& discount, long double t) {
    return std::visit([t](const auto& f) { return evaluate_at_ld(f, t); }, discount.family());
}

inline IndifferenceTriple build_indifference_triple(const DiscountFunction& discount, double sigma) {
    if (!(sigma > 0.0)) throw DomainError(Errc::ParamOutOfRange, "build_indifference_triple requires sigma > 0");
    const long double d1 = evaluate_at_ld_any(discount, sigma);
    const long double d2 = evaluate_at_ld_any(discount, 2.0L * sigma);
    const long double d3 = evaluate_at_ld_any(discount, 3.0L * sigma);

    const long double u_gamma = 1.0L;
    long double u_beta;
    if (discount.classify_impatience().tag == Impatience::Stationary) {
        // The ratio formula is 0/0 under stationarity; any positive u_beta
        // works. Fixed default for reproducibility.
        u_beta = 0.5L * d1 / d2;
    } else {
        u_beta = (d2 - d1 * d1) / (d3 - d1 * d2);
    }
    const long double u_alpha = u_gamma * d1 - u_beta * d2;
    if (!(u_alpha > 0.0L) || !(u_beta > 0.0L) || !std::isfinite((double)u_alpha) || !std::isfinite((double)u_beta))
        throw DomainError(Errc::DegenerateConstruction,
                          "indifference construction degenerated; discount is numerically non-monotone in impatience");
    return IndifferenceTriple{static_cast<double>(u_alpha), static_cast<double>(u_beta),
                              static_cast<double>(u_gamma), sigma};
}

struct DifferenceEquationResult {
    bool passed;
    double max_residual;
    double argmax_t;
};

/// Checks u_alpha D(t) + u_beta D(t + 2 sigma) = u_gamma D(t + sigma) across a
/// uniform t grid. One-switch families satisfy it identically; families
/// outside the class leave a residual.
inline DifferenceEquationResult difference_equation_check(const DiscountFunction& discount,
                                                          const IndifferenceTriple& triple, double t_lo,
                                                          double t_hi, int points = 401) {
    if (!(t_lo >= 0.0) || !(t_hi > t_lo) || points < 2)
        throw DomainError(Errc::ParamOutOfRange, "difference_equation_check requires 0 <= t_lo < t_hi");
    const double h = (t_hi - t_lo) / static_cast<double>(points - 1);
    double max_residual = 0.0;
    double argmax = t_lo;
    for (int k = 0; k < points; ++k) {
        const double t = t_lo + h * k;
        const double lhs = triple.u_alpha * discount.evaluate(t) + triple.u_beta * discount.evaluate(t + 2.0 * triple.sigma);
        const double rhs = triple.u_gamma * discount.evaluate(t + triple.sigma);
        const double residual = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
        if (residual > max_residual) {
            max_residual = residual;
            argmax = t;
        }
    }
    return DifferenceEquationResult{max_residual <= 1e-10, max_residual, argmax};
}

namespace detail {

/// Deterministic, platform-stable uniform draws: raw mt19937_64 output mapped
/// through the 53-bit mantissa, never std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform on (0, hi]: excludes exact zero.
inline double uniform_positive(std::mt19937_64& rng, double hi) {
    return (1.0 - uniform01(rng)) * hi;
}

inline int uniform_count(std::mt19937_64& rng, int max_count) {
    return 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_count));
}

}  // namespace detail

/// Fixed constants of the randomized suites. Utility scale is irrelevant to
/// switch counting, so a bounded box loses no generality.
struct SuiteDistribution {
    double time_max = 50.0;
    double utility_max = 10.0;
    int max_outcomes = 3;
};

/// Draws a random dated sequence: n in {1..max_outcomes}, strictly increasing
/// times in [0, time_max], utility levels uniform on (0, utility_max] mapped
/// back through the utility function.
inline DatedSequence random_sequence(std::mt19937_64& rng, const UtilityFunction& utility,
                                     const SuiteDistribution& dist = {}) {
    const int n = detail::uniform_count(rng, dist.max_outcomes);
    std::vector<double> times(n);
    for (;;) {
        for (double& t : times) t = detail::uniform_in(rng, 0.0, dist.time_max);
        std::sort(times.begin(), times.end());
        if (std::adjacent_find(times.begin(), times.end()) == times.end()) break;
    }
    std::vector<Outcome> outcomes;
    outcomes.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double u = detail::uniform_positive(rng, dist.utility_max);
        outcomes.emplace_back(std::pow(u, 1.0 / utility.gamma()));
    }
    return DatedSequence::make(std::move(outcomes), std::move(times));
}

/// Scan geometry used by the randomized double-switch search.
inline constexpr double kSearchSigmaMax = 50.0;
inline constexpr int kSearchGridPoints = 2001;

/// Documented seed of the bundled hyperbolic double-switch fixture: with
/// Hyperbolic{k=1}, unit power utility and the default suite distribution the
/// search finds a two-crossing witness at attempt 1512.
inline constexpr std::uint64_t kHyperbolicWitnessSeed = 1;

struct SearchResult {
    std::optional<Violation> violation;
    std::uint64_t attempts;
    std::uint64_t seed;
};

/// Randomized falsifier: draws small sequence pairs and scans for a double
/// switch. A candidate is accepted only if its crossings survive re-scanning
/// at doubled grid density, which guards against aliasing near the zero
/// tolerance. Deterministic per seed.
inline SearchResult double_switch_search(const PreferenceModel& model, std::uint64_t seed, std::uint64_t budget,
                                         const SuiteDistribution& dist = {}) {
    if (budget < 1) throw DomainError(Errc::ParamOutOfRange, "double_switch_search requires budget >= 1");
    std::mt19937_64 rng(seed);
    for (std::uint64_t attempt = 1; attempt <= budget; ++attempt) {
        const DatedSequence seq_a = random_sequence(rng, model.utility, dist);
        const DatedSequence seq_b = random_sequence(rng, model.utility, dist);
        const SwitchAnalysis scan = switch_numeric(model, seq_a, seq_b, kSearchSigmaMax, kSearchGridPoints);
        if (scan.crossings.size() < 2) continue;
        const SwitchAnalysis dense =
            switch_numeric(model, seq_a, seq_b, kSearchSigmaMax, 2 * (kSearchGridPoints - 1) + 1);
        if (dense.crossings.size() < 2) continue;
        std::vector<double> sigmas;
        for (const Crossing& c : dense.crossings) sigmas.push_back(c.sigma);
        return SearchResult{Violation{seq_a, seq_b, std::move(sigmas)}, attempt, seed};
    }
    return SearchResult{std::nullopt, budget, seed};
}

struct SuiteReport {
    int instances;
    std::vector<Violation> violations;
    double max_residual;
    std::uint64_t seed;
    bool propagation_checked;
    bool passed;
};

/// Weak one-switch suite over dated outcomes: no instance may produce the
/// strict sign pattern (+,-,+) or (-,+,-) across increasing delays, sampled
/// from the advancement bound -min(t, s) upward. For the one-switch families
/// the suite additionally propagates a constructed double indifference
/// through the DEU lottery path and requires Delta to vanish on the whole
/// grid.
inline SuiteReport weak_one_switch_property_suite(const PreferenceModel& model, int n_instances,
                                                  std::uint64_t seed, const SuiteDistribution& dist = {}) {
    if (n_instances < 1) throw DomainError(Errc::ParamOutOfRange, "suite requires n_instances >= 1");
    std::mt19937_64 rng(seed);
    SuiteReport report{n_instances, {}, 0.0, seed, false, true};

    constexpr int kSigmaPoints = 161;
    for (int instance = 0; instance < n_instances; ++instance) {
        const double t = detail::uniform_in(rng, 0.0, dist.time_max);
        const double s = detail::uniform_in(rng, 0.0, dist.time_max);
        const double ux = detail::uniform_positive(rng, dist.utility_max);
        const double uy = detail::uniform_positive(rng, dist.utility_max);
        const DatedSequence seq_a = make_sequence({std::pow(ux, 1.0 / model.utility.gamma())}, {t});
        const DatedSequence seq_b = make_sequence({std::pow(uy, 1.0 / model.utility.gamma())}, {s});

        const double lo = -std::min(t, s);
        const double hi = dist.time_max;
        const double step = (hi - lo) / (kSigmaPoints - 1);
        const double zero_tol =
            1e-11 * (1.0 + std::max(model.discount.evaluate(t + lo) * ux, model.discount.evaluate(s + lo) * uy));

        int reversals = 0;
        int last_sign = 0;
        std::vector<double> reversal_sigmas;
        for (int k = 0; k < kSigmaPoints; ++k) {
            const double sigma = lo + step * k;
            // Through core delay machinery: exercises the advancement case.
            const double value = utility(model, delay(seq_a, sigma)) - utility(model, delay(seq_b, sigma));
            const int sign = std::abs(value) <= zero_tol ? 0 : (value > 0.0 ? 1 : -1);
            if (sign == 0) continue;
            if (last_sign != 0 && sign == -last_sign) {
                ++reversals;
                reversal_sigmas.push_back(sigma);
            }
            last_sign = sign;
        }
        if (reversals >= 2) {
            report.violations.push_back(Violation{seq_a, seq_b, reversal_sigmas});
            report.passed = false;
        }
    }

    const bool one_switch_family = model.discount.as<Exponential>() || model.discount.as<LinearTimesExponential>() ||
                                   model.discount.as<SumOfExponentials>();
    if (one_switch_family) {
        report.propagation_checked = true;
        const double inv_gamma = 1.0 / model.utility.gamma();
        for (double sigma : {0.5, 1.0, 2.0}) {
            const IndifferenceTriple triple = build_indifference_triple(model.discount, sigma);
            const LotterySequence seq_a = promote(make_sequence(
                {std::pow(triple.u_alpha, inv_gamma), std::pow(triple.u_beta, inv_gamma)}, {0.0, 2.0 * sigma}));
            const LotterySequence seq_b = promote(make_sequence({std::pow(triple.u_gamma, inv_gamma)}, {sigma}));
            constexpr int kPoints = 201;
            const double step = 200.0 / (kPoints - 1);
            for (int k = 0; k < kPoints; ++k) {
                const double tau = step * k;
                const double ub = utility(model, delay(seq_b, tau));
                const double diff = utility(model, delay(seq_a, tau)) - ub;
                const double residual = std::abs(diff) / (1.0 + std::abs(ub));
                report.max_residual = std::max(report.max_residual, residual);
            }
        }
        if (report.max_residual > 1e-10) report.passed = false;
    }
    return report;
}

}  // namespace oneswitch
