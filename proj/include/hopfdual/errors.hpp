#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hopfdual {

enum class ErrorCode {
    InvalidArgument,
    NoBracket,
    DomainViolation,
    NonNegativeB2,
    NoConvergence,
    SingularJacobian,
    DegenerateBifurcation,
    WrongSide,
    PositivityLoss,
    DelayedLookupGap,
    TooShort,
    RegimeMismatch,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::NonNegativeB2: return "NonNegativeB2";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::DegenerateBifurcation: return "DegenerateBifurcation";
        case ErrorCode::WrongSide: return "WrongSide";
        case ErrorCode::PositivityLoss: return "PositivityLoss";
        case ErrorCode::DelayedLookupGap: return "DelayedLookupGap";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by simulate() when a computed price is no longer positive.
class PositivityLossError : public Error {
public:
    PositivityLossError(double time, const std::string& message)
        : Error(ErrorCode::PositivityLoss, message), time_(time) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// Raised by classify() when tau2, eta2 or omega2 vanishes.
class DegenerateBifurcationError : public Error {
public:
    explicit DegenerateBifurcationError(std::string quantity)
        : Error(ErrorCode::DegenerateBifurcation, quantity + " vanishes"), quantity_(std::move(quantity)) {}

    [[nodiscard]] const std::string& quantity() const noexcept { return quantity_; }

private:
    std::string quantity_;
};

}  // namespace hopfdual
