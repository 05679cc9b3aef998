#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "oneswitch/core.hpp"
#include "oneswitch/errors.hpp"

namespace oneswitch {

/// A strictly increasing vector of non-negative times, the result of
/// concatenating time vectors.
class TimeGrid {
public:
    static TimeGrid make(std::vector<double> points) {
        for (double p : points)
            if (!(p >= 0.0)) throw DomainError(Errc::NegativeTime, "grid times must be non-negative");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i - 1] < points[i]))
                throw DomainError(Errc::NonIncreasingTimes, "grid times must be strictly increasing");
        TimeGrid grid;
        grid.points_ = std::move(points);
        return grid;
    }

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    bool contains(double t) const noexcept {
        return std::binary_search(points_.begin(), points_.end(), t);
    }

private:
    TimeGrid() = default;
    std::vector<double> points_;
};

/// t|s: the sorted union of two strictly increasing time vectors.
/// Deduplication is by exact floating equality; coincident-but-unequal times
/// are the caller's responsibility.
inline TimeGrid concatenate_times(std::span<const double> t, std::span<const double> s) {
    const auto check = [](std::span<const double> v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] >= 0.0)) throw DomainError(Errc::NegativeTime, "times must be non-negative");
            if (i > 0 && !(v[i - 1] < v[i]))
                throw DomainError(Errc::NonIncreasingTimes, "times must be strictly increasing");
        }
    };
    check(t);
    check(s);
    std::vector<double> merged;
    merged.reserve(t.size() + s.size());
    std::merge(t.begin(), t.end(), s.begin(), s.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return TimeGrid::make(std::move(merged));
}

namespace detail {

inline Outcome neutral_payload(const Outcome*) { return Outcome::neutral(); }
inline Lottery neutral_payload(const Lottery*) { return Lottery::neutral(); }

}  // namespace detail

/// Place the sequence's outcomes at their grid times and the neutral outcome
/// everywhere else. The grid must contain every time of the sequence.
template <class Payload>
Sequence<Payload> lift(const Sequence<Payload>& seq, const TimeGrid& grid) {
    std::vector<Payload> padded;
    padded.reserve(grid.size());
    std::size_t next = 0;
    for (double l : grid.points()) {
        if (next < seq.size() && seq.times()[next] == l) {
            padded.push_back(seq.outcomes()[next]);
            ++next;
        } else {
            padded.push_back(detail::neutral_payload(static_cast<const Payload*>(nullptr)));
        }
    }
    if (next != seq.size())
        throw DomainError(Errc::GridMissingTime, "grid does not contain every time of the sequence");
    return Sequence<Payload>::make(std::move(padded), grid.points());
}

/// x lambda y on lotteries: probabilities scaled by lambda and 1 - lambda,
/// supports merged canonically.
inline Lottery mix(const Lottery& x, double lambda, const Lottery& y) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0))
        throw DomainError(Errc::ParamOutOfRange, "mixing weight must lie in [0, 1]");
    std::vector<Lottery::Atom> atoms;
    atoms.reserve(x.support().size() + y.support().size());
    for (const Lottery::Atom& atom : x.support()) atoms.push_back({atom.outcome, lambda * atom.probability});
    for (const Lottery::Atom& atom : y.support())
        atoms.push_back({atom.outcome, (1.0 - lambda) * atom.probability});
    return Lottery::make(std::move(atoms));
}

/// Promote scalar outcomes to degenerate lotteries. Promotion is always
/// explicit so the scalar and mixture-set regimes stay distinguishable.
inline LotterySequence promote(const DatedSequence& seq) {
    std::vector<Lottery> lotteries;
    lotteries.reserve(seq.size());
    for (const Outcome& x : seq.outcomes()) lotteries.push_back(Lottery::degenerate(x));
    return LotterySequence::make(std::move(lotteries), seq.times());
}

/// (x, t) lambda (y, s): both sequences are lifted onto the concatenated grid
/// t|s and mixed pointwise with weight lambda at every grid time.
inline LotterySequence mix(const LotterySequence& seq_a, double lambda, const LotterySequence& seq_b) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0))
        throw DomainError(Errc::ParamOutOfRange, "mixing weight must lie in [0, 1]");
    const TimeGrid grid = concatenate_times(seq_a.times(), seq_b.times());
    const LotterySequence lifted_a = lift(seq_a, grid);
    const LotterySequence lifted_b = lift(seq_b, grid);
    std::vector<Lottery> mixed;
    mixed.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        mixed.push_back(mix(lifted_a.outcomes()[i], lambda, lifted_b.outcomes()[i]));
    return LotterySequence::make(std::move(mixed), grid.points());
}

}  // namespace oneswitch
