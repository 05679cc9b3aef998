#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "oneswitch/core.hpp"
#include "oneswitch/discount.hpp"
#include "oneswitch/errors.hpp"

namespace oneswitch {

inline constexpr double kDefaultSigmaMax = 500.0;
inline constexpr int kDefaultGridPoints = 50'001;

enum class SwitchDirection { PosToNeg, NegToPos };

inline const char* direction_name(SwitchDirection d) noexcept {
    return d == SwitchDirection::PosToNeg ? "pos_to_neg" : "neg_to_pos";
}

struct ConstantPositive {};
struct ConstantNegative {};
struct IdenticallyZero {};
struct UniqueSwitch {
    double sigma_star;
    SwitchDirection direction;
};
struct MultiSwitch {
    std::vector<double> crossings;
};

using SwitchVerdict = std::variant<ConstantPositive, ConstantNegative, IdenticallyZero, UniqueSwitch, MultiSwitch>;

inline const char* verdict_name(const SwitchVerdict& v) noexcept {
    switch (v.index()) {
        case 0: return "constant_positive";
        case 1: return "constant_negative";
        case 2: return "identically_zero";
        case 3: return "unique_switch";
        case 4: return "multi_switch";
    }
    return "unknown";
}

enum class SolveMethod { ClosedForm, NumericScan };

inline const char* method_name(SolveMethod m) noexcept {
    return m == SolveMethod::ClosedForm ? "closed_form" : "numeric_scan";
}

/// A = sum_i e^{-r t_i} u(x_i) - sum_j e^{-r s_j} u(y_j)
/// B = sum_i t_i e^{-r t_i} u(x_i) - sum_j s_j e^{-r s_j} u(y_j)
struct LinExpCoefficients {
    double A;
    double B;
};

/// A~ = sum_i e^{-b t_i} u(x_i) - sum_j e^{-b s_j} u(y_j)
/// B~ = sum_i e^{-(b+c) t_i} u(x_i) - sum_j e^{-(b+c) s_j} u(y_j)
struct SumExpCoefficients {
    double A_tilde;
    double B_tilde;
};

using SwitchCoefficients = std::variant<LinExpCoefficients, SumExpCoefficients>;

/// A refined sign change of the numeric scan. When the bracket spans grid
/// points inside the zero tolerance, the spanned zero run is recorded.
struct Crossing {
    double sigma;
    SwitchDirection direction;
    int zero_points_spanned = 0;
    double zero_lo = 0.0;
    double zero_hi = 0.0;
};

/// A maximal run of grid points with |delta| <= zero_tol.
struct ZeroRegion {
    double lo;
    double hi;
};

struct SwitchAnalysis {
    SwitchVerdict verdict;
    SolveMethod method;
    std::optional<SwitchCoefficients> coefficients;  // closed form only
    std::vector<Crossing> crossings;                 // ascending
    std::vector<ZeroRegion> zero_regions;            // numeric scan only
    double zero_tol = 0.0;                           // numeric scan only
    bool grid_too_coarse = false;                    // advisory: two crossings within one grid cell
};

inline std::optional<double> sigma_star(const SwitchAnalysis& analysis) {
    if (const auto* u = std::get_if<UniqueSwitch>(&analysis.verdict)) return u->sigma_star;
    return std::nullopt;
}

/// U(x, t) = sum_i D(t_i) u(x_i). For lottery sequences u is the expected
/// utility, which makes U the discounted expected utility.
template <class Payload>
double utility(const PreferenceModel& model, const Sequence<Payload>& seq) {
    double total = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        total += model.discount.evaluate(seq.times()[i]) * model.utility(seq.outcomes()[i]);
    return total;
}

/// Delta(sigma) = U(x, t + sigma) - U(y, s + sigma), straight from the
/// definition. Exactly antisymmetric in the two sequences.
template <class Payload>
double delta(const PreferenceModel& model, const Sequence<Payload>& seq_a, const Sequence<Payload>& seq_b,
             double sigma) {
    if (!(sigma >= 0.0)) throw DomainError(Errc::ShiftOutOfDomain, "delta requires sigma >= 0");
    const DiscountFunction& discount = model.discount;
    double sum_a = 0.0;
    for (std::size_t i = 0; i < seq_a.size(); ++i)
        sum_a += discount.evaluate(seq_a.times()[i] + sigma) * model.utility(seq_a.outcomes()[i]);
    double sum_b = 0.0;
    for (std::size_t j = 0; j < seq_b.size(); ++j)
        sum_b += discount.evaluate(seq_b.times()[j] + sigma) * model.utility(seq_b.outcomes()[j]);
    return sum_a - sum_b;
}

namespace detail {

/// Times and utility values of a sequence pair, fixed for a whole scan.
struct DeltaTerms {
    std::vector<double> ta, ua;
    std::vector<double> tb, ub;

    static DeltaTerms make(const PreferenceModel& model, const DatedSequence& a, const DatedSequence& b) {
        DeltaTerms terms;
        terms.ta = a.times();
        terms.tb = b.times();
        terms.ua.reserve(a.size());
        for (const Outcome& x : a.outcomes()) terms.ua.push_back(model.utility(x));
        terms.ub.reserve(b.size());
        for (const Outcome& y : b.outcomes()) terms.ub.push_back(model.utility(y));
        return terms;
    }

    /// Largest single discounted-utility term. D is decreasing, so the
    /// maximum over all delays is attained at sigma = 0.
    double max_term(const DiscountFunction& discount) const {
        double m = 0.0;
        for (std::size_t i = 0; i < ta.size(); ++i) m = std::max(m, discount.evaluate(ta[i]) * ua[i]);
        for (std::size_t j = 0; j < tb.size(); ++j) m = std::max(m, discount.evaluate(tb[j]) * ub[j]);
        return m;
    }
};

template <class Fam>
inline double delta_point(const Fam& fam, const DeltaTerms& terms, double sigma) {
    double sum_a = 0.0;
    for (std::size_t i = 0; i < terms.ta.size(); ++i) sum_a += evaluate_at(fam, terms.ta[i] + sigma) * terms.ua[i];
    double sum_b = 0.0;
    for (std::size_t j = 0; j < terms.tb.size(); ++j) sum_b += evaluate_at(fam, terms.tb[j] + sigma) * terms.ub[j];
    return sum_a - sum_b;
}

template <class Fam>
inline long double delta_point_ld(const Fam& fam, const DeltaTerms& terms, double sigma) {
    long double sum_a = 0.0L;
    for (std::size_t i = 0; i < terms.ta.size(); ++i)
        sum_a += evaluate_at_ld(fam, (long double)terms.ta[i] + (long double)sigma) * (long double)terms.ua[i];
    long double sum_b = 0.0L;
    for (std::size_t j = 0; j < terms.tb.size(); ++j)
        sum_b += evaluate_at_ld(fam, (long double)terms.tb[j] + (long double)sigma) * (long double)terms.ub[j];
    return sum_a - sum_b;
}

/// Bisection on the sign of delta over a bracket with strictly opposite
/// endpoint signs. Extended precision keeps the located root stable even
/// when the decaying envelope has shrunk delta by many orders of magnitude.
template <class Fam>
inline double bisect_crossing(const Fam& fam, const DeltaTerms& terms, double lo, double hi, int sign_lo) {
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const long double dm = delta_point_ld(fam, terms, mid);
        if (dm == 0.0L) return mid;
        if ((dm > 0.0L ? 1 : -1) == sign_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline void append_zero_region(std::vector<ZeroRegion>& regions, double lo, double hi) {
    regions.push_back(ZeroRegion{lo, hi});
}

}  // namespace detail

/// Grid scan of Delta over [0, sigma_max]: strict sign changes are refined by
/// bisection to an interval of width <= 1e-12; grid points with
/// |Delta| <= zero_tol are collected into zero regions. The verdict is
/// synthesized from the refined crossings and the zero regions.
inline SwitchAnalysis switch_numeric(const PreferenceModel& model, const DatedSequence& seq_a,
                                     const DatedSequence& seq_b, double sigma_max = kDefaultSigmaMax,
                                     int grid_points = kDefaultGridPoints) {
    if (!(sigma_max > 0.0)) throw DomainError(Errc::ParamOutOfRange, "switch_numeric requires sigma_max > 0");
    if (grid_points < 16) throw DomainError(Errc::ParamOutOfRange, "switch_numeric requires grid_points >= 16");

    SwitchAnalysis analysis;
    analysis.method = SolveMethod::NumericScan;

    if (seq_a == seq_b) {
        analysis.verdict = IdenticallyZero{};
        return analysis;
    }

    const detail::DeltaTerms terms = detail::DeltaTerms::make(model, seq_a, seq_b);
    // Relative zero tolerance anchored to the largest single term: Delta is a
    // small difference of sums, so an absolute tolerance alone misclassifies
    // large-magnitude instances.
    const double zero_tol = 1e-11 * (1.0 + terms.max_term(model.discount));
    analysis.zero_tol = zero_tol;

    const double step = sigma_max / static_cast<double>(grid_points - 1);

    std::visit(
        [&](const auto& fam) {
            int last_sign = 0;
            double last_sigma = 0.0;
            int last_index = -1;
            int zero_run_start = -1;
            double zero_run_lo = 0.0, zero_run_hi = 0.0;
            bool any_strict = false;

            for (int k = 0; k < grid_points; ++k) {
                const double sigma = step * k;
                const double value = detail::delta_point(fam, terms, sigma);
                const int sign = std::abs(value) <= zero_tol ? 0 : (value > 0.0 ? 1 : -1);

                if (sign == 0) {
                    if (zero_run_start < 0) {
                        zero_run_start = k;
                        zero_run_lo = sigma;
                    }
                    zero_run_hi = sigma;
                    continue;
                }
                if (zero_run_start >= 0) {
                    detail::append_zero_region(analysis.zero_regions, zero_run_lo, zero_run_hi);
                    zero_run_start = -1;
                }
                any_strict = true;
                if (last_sign != 0 && sign == -last_sign) {
                    Crossing crossing;
                    crossing.sigma = detail::bisect_crossing(fam, terms, last_sigma, sigma, last_sign);
                    crossing.direction =
                        last_sign > 0 ? SwitchDirection::PosToNeg : SwitchDirection::NegToPos;
                    crossing.zero_points_spanned = k - last_index - 1;
                    if (crossing.zero_points_spanned > 0) {
                        crossing.zero_lo = step * (last_index + 1);
                        crossing.zero_hi = step * (k - 1);
                    }
                    analysis.crossings.push_back(crossing);
                }
                last_sign = sign;
                last_sigma = sigma;
                last_index = k;
            }
            if (zero_run_start >= 0) detail::append_zero_region(analysis.zero_regions, zero_run_lo, zero_run_hi);

            if (!any_strict) {
                analysis.verdict = IdenticallyZero{};
            } else if (analysis.crossings.empty()) {
                analysis.verdict = last_sign > 0 ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
            } else if (analysis.crossings.size() == 1) {
                analysis.verdict = UniqueSwitch{analysis.crossings.front().sigma, analysis.crossings.front().direction};
            } else {
                MultiSwitch multi;
                for (const Crossing& c : analysis.crossings) multi.crossings.push_back(c.sigma);
                analysis.verdict = std::move(multi);
            }
            for (std::size_t i = 1; i < analysis.crossings.size(); ++i)
                if (analysis.crossings[i].sigma - analysis.crossings[i - 1].sigma < step)
                    analysis.grid_too_coarse = true;
        },
        model.discount.family());

    return analysis;
}

namespace detail {

struct LinExpClosedForm {
    long double A;
    long double B;
    double c;
};

/// Verdict of sign(A + cB + cA sigma) over sigma >= 0, per the linear-times-
/// exponential factorization. c = 0 covers the pure exponential family.
inline void solve_lin_exp(SwitchAnalysis& analysis, const LinExpClosedForm& cf) {
    const long double A = cf.A;
    const long double B = cf.B;
    const long double c = cf.c;
    analysis.coefficients = LinExpCoefficients{static_cast<double>(A), static_cast<double>(B)};

    if (c == 0.0L || A == 0.0L) {
        // Sign is constant: that of A when c = 0, that of cB when A = 0.
        const long double s = c == 0.0L ? A : c * B;
        if (s == 0.0L)
            analysis.verdict = IdenticallyZero{};
        else
            analysis.verdict = s > 0.0L ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
        return;
    }

    const long double root = -(A + c * B) / (c * A);
    if (root >= 0.0L) {
        // A root at exactly 0 is still reported as a switch: the definition
        // admits sigma* >= 0.
        const double sig = root == 0.0L ? 0.0 : static_cast<double>(root);
        const SwitchDirection dir = c * A > 0.0L ? SwitchDirection::NegToPos : SwitchDirection::PosToNeg;
        analysis.verdict = UniqueSwitch{sig, dir};
        analysis.crossings.push_back(Crossing{sig, dir, 0, 0.0, 0.0});
    } else {
        analysis.verdict = A > 0.0L ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
    }
}

struct SumExpClosedForm {
    long double A_tilde;
    long double B_tilde;
    double a;
    double c;
};

/// Verdict of sign(a A~ + (1-a) B~ e^{-c sigma}) over sigma >= 0.
inline void solve_sum_exp(SwitchAnalysis& analysis, const SumExpClosedForm& cf) {
    const long double At = cf.A_tilde;
    const long double Bt = cf.B_tilde;
    const long double a = cf.a;
    const long double c = cf.c;
    analysis.coefficients = SumExpCoefficients{static_cast<double>(At), static_cast<double>(Bt)};

    const long double slope = (1.0L - a) * Bt;  // coefficient of e^{-c sigma}
    if (a == 1.0L || Bt == 0.0L) {
        const long double s = a * At;
        if (s == 0.0L)
            analysis.verdict = IdenticallyZero{};
        else
            analysis.verdict = s > 0.0L ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
        return;
    }
    if (At == 0.0L) {
        // a A~ + slope e^{-c sigma} = slope e^{-c sigma}: never zero for finite sigma.
        analysis.verdict = slope > 0.0L ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
        return;
    }

    const long double x_root = -(a * At) / slope;  // e^{-c sigma} at the root
    if (x_root > 0.0L && x_root <= 1.0L) {
        const long double root = -std::log(x_root) / c;
        const double sig = root == 0.0L ? 0.0 : static_cast<double>(root);
        // For sigma < sigma*, e^{-c sigma} > x_root and the sign is that of slope.
        const SwitchDirection dir = slope > 0.0L ? SwitchDirection::PosToNeg : SwitchDirection::NegToPos;
        analysis.verdict = UniqueSwitch{sig, dir};
        analysis.crossings.push_back(Crossing{sig, dir, 0, 0.0, 0.0});
    } else {
        const long double at_zero = a * At + slope;  // sign at sigma = 0, constant throughout
        analysis.verdict = at_zero > 0.0L ? SwitchVerdict(ConstantPositive{}) : SwitchVerdict(ConstantNegative{});
    }
}

}  // namespace detail

/// Closed-form switch solving via the factorizations
///   Delta(sigma) = e^{-r sigma} (A + cB + cA sigma)            (lin_exp)
///   Delta(sigma) = e^{-b sigma} (a A~ + (1-a) B~ e^{-c sigma}) (sum_exp)
/// The exponential family is the c = 0 special case of the first form.
/// Coefficients are accumulated in extended precision so that the located
/// root agrees with the numeric scan at tight tolerance.
inline SwitchAnalysis switch_closed_form(const PreferenceModel& model, const DatedSequence& seq_a,
                                         const DatedSequence& seq_b) {
    SwitchAnalysis analysis;
    analysis.method = SolveMethod::ClosedForm;

    if (model.discount.as<Hyperbolic>())
        throw DomainError(Errc::UnsupportedFamily,
                          "hyperbolic discounting has no closed-form switch solution; use switch_numeric");

    if (seq_a == seq_b) {
        analysis.verdict = IdenticallyZero{};
        return analysis;
    }

    const auto weighted_sums = [&](double rate_1, double rate_2, bool time_weight_second) {
        // Returns (S1, S2) where S1 uses e^{-rate_1 t} and S2 uses either
        // t e^{-rate_2 t} (lin_exp B) or e^{-rate_2 t} (sum_exp B~).
        long double s1 = 0.0L, s2 = 0.0L;
        const auto accumulate = [&](const DatedSequence& seq, long double sign) {
            for (std::size_t i = 0; i < seq.size(); ++i) {
                const long double t = seq.times()[i];
                const long double u = model.utility(seq.outcomes()[i]);
                s1 += sign * u * std::exp(-(long double)rate_1 * t);
                const long double e2 = std::exp(-(long double)rate_2 * t);
                s2 += sign * u * (time_weight_second ? t * e2 : e2);
            }
        };
        accumulate(seq_a, 1.0L);
        accumulate(seq_b, -1.0L);
        return std::pair<long double, long double>(s1, s2);
    };

    if (const auto* f = model.discount.as<Exponential>()) {
        const auto [A, B] = weighted_sums(f->r, f->r, true);
        detail::solve_lin_exp(analysis, detail::LinExpClosedForm{A, B, 0.0});
    } else if (const auto* f = model.discount.as<LinearTimesExponential>()) {
        const auto [A, B] = weighted_sums(f->r, f->r, true);
        detail::solve_lin_exp(analysis, detail::LinExpClosedForm{A, B, f->c});
    } else if (const auto* f = model.discount.as<SumOfExponentials>()) {
        const auto [At, Bt] = weighted_sums(f->b, f->b + f->c, false);
        detail::solve_sum_exp(analysis, detail::SumExpClosedForm{At, Bt, f->a, f->c});
    }
    return analysis;
}

}  // namespace oneswitch
