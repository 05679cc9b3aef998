#pragma once

#include <stdexcept>
#include <string>

namespace oneswitch {

/// Machine-readable reason attached to every domain error thrown by the library.
enum class Errc {
    LengthMismatch,
    EmptySequence,
    NonIncreasingTimes,
    NegativeTime,
    NegativeOutcome,
    ShiftOutOfDomain,
    ParamOutOfRange,
    InvalidLottery,
    NotALottery,
    UnsupportedFamily,
    GridMissingTime,
    GridTooCoarse,
    DegenerateConstruction,
};

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::LengthMismatch: return "length_mismatch";
        case Errc::EmptySequence: return "empty_sequence";
        case Errc::NonIncreasingTimes: return "non_increasing_times";
        case Errc::NegativeTime: return "negative_time";
        case Errc::NegativeOutcome: return "negative_outcome";
        case Errc::ShiftOutOfDomain: return "shift_out_of_domain";
        case Errc::ParamOutOfRange: return "param_out_of_range";
        case Errc::InvalidLottery: return "invalid_lottery";
        case Errc::NotALottery: return "not_a_lottery";
        case Errc::UnsupportedFamily: return "unsupported_family";
        case Errc::GridMissingTime: return "grid_missing_time";
        case Errc::GridTooCoarse: return "grid_too_coarse";
        case Errc::DegenerateConstruction: return "degenerate_construction";
    }
    return "unknown";
}

/// Thrown whenever an input violates a documented invariant or precondition.
/// The message names the first violated constraint.
class DomainError : public std::runtime_error {
public:
    DomainError(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace oneswitch
