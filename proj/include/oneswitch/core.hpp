#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "oneswitch/discount.hpp"
#include "oneswitch/errors.hpp"

namespace oneswitch {

/// An element of the outcome space X = [0, inf). Zero is the neutral outcome.
class Outcome {
public:
    Outcome() noexcept : value_(0.0) {}
    explicit Outcome(double value) : value_(value) {
        if (!(value >= 0.0)) throw DomainError(Errc::NegativeOutcome, "outcome value must be non-negative");
    }

    double value() const noexcept { return value_; }
    static Outcome neutral() noexcept { return Outcome(); }

    friend bool operator==(const Outcome& a, const Outcome& b) noexcept { return a.value_ == b.value_; }

private:
    double value_;
};

/// A finite-support lottery over outcomes. Canonical form: atoms sorted by
/// outcome value, equal outcomes merged, zero-probability atoms dropped.
class Lottery {
public:
    struct Atom {
        Outcome outcome;
        double probability;
    };

    static Lottery make(std::vector<Atom> support) {
        if (support.empty()) throw DomainError(Errc::InvalidLottery, "lottery support must be non-empty");
        double total = 0.0;
        for (const Atom& atom : support) {
            if (!(atom.probability >= 0.0) || !(atom.probability <= 1.0))
                throw DomainError(Errc::InvalidLottery, "lottery probabilities must lie in [0, 1]");
            total += atom.probability;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw DomainError(Errc::InvalidLottery, "lottery probabilities must sum to 1 within 1e-12");
        std::sort(support.begin(), support.end(), [](const Atom& a, const Atom& b) {
            return a.outcome.value() < b.outcome.value();
        });
        std::vector<Atom> canonical;
        canonical.reserve(support.size());
        for (const Atom& atom : support) {
            if (!canonical.empty() && canonical.back().outcome == atom.outcome)
                canonical.back().probability += atom.probability;
            else
                canonical.push_back(atom);
        }
        std::erase_if(canonical, [](const Atom& a) { return a.probability == 0.0; });
        Lottery lottery;
        lottery.support_ = std::move(canonical);
        return lottery;
    }

    static Lottery degenerate(Outcome x) { return make({Atom{x, 1.0}}); }
    static Lottery neutral() { return degenerate(Outcome::neutral()); }

    const std::vector<Atom>& support() const noexcept { return support_; }

    friend bool operator==(const Lottery& a, const Lottery& b) noexcept {
        if (a.support_.size() != b.support_.size()) return false;
        for (std::size_t i = 0; i < a.support_.size(); ++i)
            if (!(a.support_[i].outcome == b.support_[i].outcome) ||
                a.support_[i].probability != b.support_[i].probability)
                return false;
        return true;
    }

private:
    Lottery() = default;
    std::vector<Atom> support_;
};

/// A sequence of dated outcomes: payloads paired with strictly increasing,
/// non-negative times. Immutable once constructed.
template <class Payload>
class Sequence {
public:
    static Sequence make(std::vector<Payload> outcomes, std::vector<double> times) {
        if (outcomes.size() != times.size())
            throw DomainError(Errc::LengthMismatch, "outcome and time vectors must have equal length");
        if (outcomes.empty())
            throw DomainError(Errc::EmptySequence, "a sequence must contain at least one dated outcome");
        for (double t : times)
            if (!(t >= 0.0)) throw DomainError(Errc::NegativeTime, "times must be non-negative");
        // Strictness is checked exactly: times are user-specified, not computed.
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i - 1] < times[i]))
                throw DomainError(Errc::NonIncreasingTimes, "times must be strictly increasing");
        return Sequence(std::move(outcomes), std::move(times));
    }

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<Payload>& outcomes() const noexcept { return outcomes_; }
    const std::vector<double>& times() const noexcept { return times_; }
    double first_time() const noexcept { return times_.front(); }

    friend bool operator==(const Sequence& a, const Sequence& b) {
        return a.times_ == b.times_ && a.outcomes_ == b.outcomes_;
    }

private:
    Sequence(std::vector<Payload> outcomes, std::vector<double> times)
        : outcomes_(std::move(outcomes)), times_(std::move(times)) {}

    std::vector<Payload> outcomes_;
    std::vector<double> times_;
};

using DatedSequence = Sequence<Outcome>;
using LotterySequence = Sequence<Lottery>;

template <class Payload>
Sequence<Payload> make_sequence(std::vector<Payload> outcomes, std::vector<double> times) {
    return Sequence<Payload>::make(std::move(outcomes), std::move(times));
}

inline DatedSequence make_sequence(std::initializer_list<double> values, std::initializer_list<double> times) {
    std::vector<Outcome> outcomes;
    outcomes.reserve(values.size());
    for (double v : values) outcomes.emplace_back(v);
    return DatedSequence::make(std::move(outcomes), std::vector<double>(times));
}

/// Shift every time by sigma. A negative sigma (advancement) is admitted as
/// long as the first time stays non-negative.
template <class Payload>
Sequence<Payload> delay(const Sequence<Payload>& seq, double sigma) {
    if (seq.first_time() + sigma < 0.0)
        throw DomainError(Errc::ShiftOutOfDomain, "shift would move the first time below 0");
    std::vector<double> shifted = seq.times();
    for (double& t : shifted) t += sigma;
    return Sequence<Payload>::make(seq.outcomes(), std::move(shifted));
}

/// Scalar utility u(x) = x^gamma with gamma > 0: continuous, strictly
/// increasing, u(0) = 0. The lottery extension takes expectations, which makes
/// it mixture linear by construction.
class UtilityFunction {
public:
    explicit UtilityFunction(double gamma) : gamma_(gamma) {
        if (!std::isfinite(gamma) || !(gamma > 0.0))
            throw DomainError(Errc::ParamOutOfRange, "power utility requires gamma > 0");
    }

    double gamma() const noexcept { return gamma_; }

    double operator()(double x) const {
        if (!(x >= 0.0)) throw DomainError(Errc::NegativeOutcome, "utility domain is [0, inf)");
        return gamma_ == 1.0 ? x : std::pow(x, gamma_);
    }

    double operator()(const Outcome& x) const { return (*this)(x.value()); }

    double operator()(const Lottery& lottery) const {
        double expected = 0.0;
        for (const Lottery::Atom& atom : lottery.support())
            expected += atom.probability * (*this)(atom.outcome);
        return expected;
    }

private:
    double gamma_;
};

/// A discounted-utility model: U(x, t) = sum_i D(t_i) u(x_i).
struct PreferenceModel {
    UtilityFunction utility;
    DiscountFunction discount;
};

}  // namespace oneswitch
