#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfinv {

/// Failure categories raised by the numerical routines. The CLI maps every
/// kind except ConfigError to exit status 3.
enum class ErrorKind {
    BoundNotMet,
    UnsupportedPoint,
    DegenerateRates,
    OrderingViolation,
    CollidingZeros,
    GridTooCoarse,
    ZeroDerivative,
    Inconclusive,
    StepUnderflow,
    NoConvergence,
    RegimeUnsupported,
    TailTooHeavy,
    TailMeanUnbounded,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class NumericError : public std::runtime_error {
public:
    NumericError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw NumericError(kind, what);
}

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::BoundNotMet: return "BoundNotMet";
        case ErrorKind::UnsupportedPoint: return "UnsupportedPoint";
        case ErrorKind::DegenerateRates: return "DegenerateRates";
        case ErrorKind::OrderingViolation: return "OrderingViolation";
        case ErrorKind::CollidingZeros: return "CollidingZeros";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::ZeroDerivative: return "ZeroDerivative";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::RegimeUnsupported: return "RegimeUnsupported";
        case ErrorKind::TailTooHeavy: return "TailTooHeavy";
        case ErrorKind::TailMeanUnbounded: return "TailMeanUnbounded";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace cfinv
