#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "oneswitch/errors.hpp"

namespace oneswitch {

/// D(t) = e^{-r t}
struct Exponential {
    double r;
};

/// D(t) = (1 + c t) e^{-r t}
struct LinearTimesExponential {
    double c;
    double r;
};

/// D(t) = a e^{-b t} + (1 - a) e^{-(b + c) t}
struct SumOfExponentials {
    double a;
    double b;
    double c;
};

/// D(t) = 1 / (1 + k t). Not a one-switch family; kept as the falsification target.
struct Hyperbolic {
    double k;
};

// Per-family closed forms. Free functions so hot loops can dispatch the
// family once and evaluate terms directly.

inline double evaluate_at(const Exponential& f, double t) { return std::exp(-f.r * t); }
inline double evaluate_at(const LinearTimesExponential& f, double t) {
    return (1.0 + f.c * t) * std::exp(-f.r * t);
}
inline double evaluate_at(const SumOfExponentials& f, double t) {
    return f.a * std::exp(-f.b * t) + (1.0 - f.a) * std::exp(-(f.b + f.c) * t);
}
inline double evaluate_at(const Hyperbolic& f, double t) { return 1.0 / (1.0 + f.k * t); }

inline long double evaluate_at_ld(const Exponential& f, long double t) { return std::exp(-(long double)f.r * t); }
inline long double evaluate_at_ld(const LinearTimesExponential& f, long double t) {
    return (1.0L + (long double)f.c * t) * std::exp(-(long double)f.r * t);
}
inline long double evaluate_at_ld(const SumOfExponentials& f, long double t) {
    return (long double)f.a * std::exp(-(long double)f.b * t) +
           (1.0L - (long double)f.a) * std::exp(-((long double)f.b + (long double)f.c) * t);
}
inline long double evaluate_at_ld(const Hyperbolic& f, long double t) { return 1.0L / (1.0L + (long double)f.k * t); }

inline double derivative_at(const Exponential& f, double t) { return -f.r * std::exp(-f.r * t); }
inline double derivative_at(const LinearTimesExponential& f, double t) {
    return std::exp(-f.r * t) * (f.c - f.r * (1.0 + f.c * t));
}
inline double derivative_at(const SumOfExponentials& f, double t) {
    return -f.a * f.b * std::exp(-f.b * t) - (1.0 - f.a) * (f.b + f.c) * std::exp(-(f.b + f.c) * t);
}
inline double derivative_at(const Hyperbolic& f, double t) {
    const double d = 1.0 + f.k * t;
    return -f.k / (d * d);
}

inline double rate_at(const Exponential& f, double) { return f.r; }
inline double rate_at(const LinearTimesExponential& f, double t) { return f.r - f.c / (1.0 + f.c * t); }
inline double rate_at(const SumOfExponentials& f, double t) {
    const double e = std::exp(-f.c * t);
    return (f.a * f.b + (1.0 - f.a) * (f.b + f.c) * e) / (f.a + (1.0 - f.a) * e);
}
inline double rate_at(const Hyperbolic& f, double t) { return f.k / (1.0 + f.k * t); }

inline double rate_derivative_at(const Exponential&, double) { return 0.0; }
inline double rate_derivative_at(const LinearTimesExponential& f, double t) {
    const double d = 1.0 + f.c * t;
    return f.c * f.c / (d * d);
}
inline double rate_derivative_at(const SumOfExponentials& f, double t) {
    const double e = std::exp(-f.c * t);
    const double q = f.c * f.c * e * f.a * (f.a - 1.0);
    const double d = f.a + (1.0 - f.a) * e;
    return q / (d * d);
}
inline double rate_derivative_at(const Hyperbolic& f, double t) {
    const double d = 1.0 + f.k * t;
    return -f.k * f.k / (d * d);
}

enum class Impatience { Stationary, StrictlyDI, StrictlyII, NonMonotone };

inline const char* impatience_name(Impatience tag) noexcept {
    switch (tag) {
        case Impatience::Stationary: return "stationary";
        case Impatience::StrictlyDI: return "strictly_di";
        case Impatience::StrictlyII: return "strictly_ii";
        case Impatience::NonMonotone: return "non_monotone";
    }
    return "unknown";
}

/// Evidence for a closed-form impatience classification.
struct ClosedFormRule {
    std::string rule;
};

/// Evidence triple (t, s, sigma) with t < s and sigma > 0. The attested ratio
/// inequality D(t)/D(t+sigma) vs D(s)/D(s+sigma) is re-checkable from D alone.
struct NumericWitness {
    double t;
    double s;
    double sigma;
};

struct ImpatienceClass {
    Impatience tag;
    std::variant<ClosedFormRule, NumericWitness> evidence;
};

/// A validated discount function: strictly decreasing, D(0) = 1, values in
/// (0, 1], vanishing at infinity. Construction rejects any parameter tuple
/// outside the family's feasible set and names the first violated constraint.
class DiscountFunction {
public:
    using Family = std::variant<Exponential, LinearTimesExponential, SumOfExponentials, Hyperbolic>;

    explicit DiscountFunction(Exponential f) : family_(validated(f)) {}
    explicit DiscountFunction(LinearTimesExponential f) : family_(validated(f)) {}
    explicit DiscountFunction(SumOfExponentials f) : family_(validated(f)) {}
    explicit DiscountFunction(Hyperbolic f) : family_(validated(f)) {}
    explicit DiscountFunction(Family f)
        : family_(std::visit([](auto g) { return Family(validated(g)); }, f)) {}

    const Family& family() const noexcept { return family_; }

    template <class F>
    const F* as() const noexcept {
        return std::get_if<F>(&family_);
    }

    const char* family_key() const noexcept {
        switch (family_.index()) {
            case 0: return "exponential";
            case 1: return "lin_exp";
            case 2: return "sum_exp";
            case 3: return "hyperbolic";
        }
        return "unknown";
    }

    double evaluate(double t) const {
        require_time(t);
        return std::visit([t](const auto& f) { return evaluate_at(f, t); }, family_);
    }

    double operator()(double t) const { return evaluate(t); }

    /// First derivative, closed form per family. Non-positive everywhere,
    /// strictly negative for t > 0.
    double derivative(double t) const {
        require_time(t);
        return std::visit([t](const auto& f) { return derivative_at(f, t); }, family_);
    }

    /// Time preference rate r(t) = -D'(t)/D(t), family-specific closed form.
    double rate(double t) const {
        require_time(t);
        return std::visit([t](const auto& f) { return rate_at(f, t); }, family_);
    }

    /// Closed-form derivative of the time preference rate. Its sign decides
    /// the impatience regime: positive means strictly increasing impatience,
    /// negative strictly decreasing, zero stationary.
    double rate_derivative(double t) const {
        require_time(t);
        return std::visit([t](const auto& f) { return rate_derivative_at(f, t); }, family_);
    }

    /// Closed-form parameter rules only; the numeric counterpart lives in the
    /// verification oracles and stays independent of this classification.
    ImpatienceClass classify_impatience() const {
        struct Visitor {
            ImpatienceClass operator()(const Exponential&) const {
                return {Impatience::Stationary, ClosedFormRule{"exponential: constant rate r"}};
            }
            ImpatienceClass operator()(const LinearTimesExponential& f) const {
                if (f.c > 0.0)
                    return {Impatience::StrictlyII,
                            ClosedFormRule{"lin_exp: c > 0 makes the rate r - c/(1+ct) strictly increasing"}};
                return {Impatience::Stationary, ClosedFormRule{"lin_exp: c = 0 collapses to the exponential"}};
            }
            ImpatienceClass operator()(const SumOfExponentials& f) const {
                if (f.a < 1.0)
                    return {Impatience::StrictlyDI, ClosedFormRule{"sum_exp: a < 1 makes Q(t) strictly negative"}};
                if (f.a > 1.0)
                    return {Impatience::StrictlyII, ClosedFormRule{"sum_exp: a > 1 makes Q(t) strictly positive"}};
                return {Impatience::Stationary, ClosedFormRule{"sum_exp: a = 1 collapses to the exponential"}};
            }
            ImpatienceClass operator()(const Hyperbolic&) const {
                return {Impatience::StrictlyDI, ClosedFormRule{"hyperbolic: ln D = -ln(1+kt) is strictly convex"}};
            }
        };
        return std::visit(Visitor{}, family_);
    }

private:
    static void require_time(double t) {
        if (!(t >= 0.0)) throw DomainError(Errc::NegativeTime, "discount function domain is t >= 0");
    }

    [[noreturn]] static void reject(const std::string& constraint) {
        throw DomainError(Errc::ParamOutOfRange, constraint);
    }

    static Exponential validated(Exponential f) {
        if (!std::isfinite(f.r)) reject("exponential requires finite r");
        if (!(f.r > 0.0)) reject("exponential requires r > 0");
        return f;
    }

    static LinearTimesExponential validated(LinearTimesExponential f) {
        if (!std::isfinite(f.c) || !std::isfinite(f.r)) reject("lin_exp requires finite parameters");
        if (!(f.c >= 0.0)) reject("lin_exp requires c >= 0");
        if (!(f.r > 0.0)) reject("lin_exp requires r > 0");
        if (!(f.r >= f.c)) reject("lin_exp requires r >= c");
        return f;
    }

    static SumOfExponentials validated(SumOfExponentials f) {
        if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c))
            reject("sum_exp requires finite parameters");
        if (!(f.a > 0.0)) reject("sum_exp requires a > 0");
        if (!(f.b > 0.0)) reject("sum_exp requires b > 0");
        if (!(f.c > 0.0)) reject("sum_exp requires c > 0");
        const double bound = f.b / f.c + 1.0;
        if (!(f.a <= bound)) {
            std::ostringstream msg;
            msg << "sum_exp requires a <= b/c + 1 = " << bound;
            reject(msg.str());
        }
        return f;
    }

    static Hyperbolic validated(Hyperbolic f) {
        if (!std::isfinite(f.k)) reject("hyperbolic requires finite k");
        if (!(f.k > 0.0)) reject("hyperbolic requires k > 0");
        return f;
    }

    Family family_;
};

}  // namespace oneswitch
