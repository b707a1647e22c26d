#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hopfdual/model.hpp"

namespace hopfdual {

enum class CheckStatus { Match, PaperConvention, Mismatch };

[[nodiscard]] std::string_view to_string(CheckStatus s) noexcept;

/// Closed form vs finite-difference oracle for one coefficient.
struct CoefficientCheck {
    int index;  // 1..9
    double closed_form;
    double oracle;
    double rel_diff;
    std::optional<double> ratio;  // oracle / closed_form, absent when closed_form = 0
    CheckStatus status;
};

inline constexpr double kOracleRelTolerance = 1e-5;
inline constexpr double kConventionRatioTolerance = 1e-3;

/// The closed forms halve the u v coefficient and divide the u v^2 one by
/// three relative to a direct expansion; those two are reported as
/// PaperConvention when the oracle/closed ratio is 2 (b4) or 3 (b8).
[[nodiscard]] std::vector<CoefficientCheck> verify_coefficients(const ModelConfig& config);

[[nodiscard]] bool all_consistent(const std::vector<CoefficientCheck>& checks) noexcept;

}  // namespace hopfdual
