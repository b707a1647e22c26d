#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hopfdual/bifurcation.hpp"
#include "hopfdual/model.hpp"

namespace hopfdual {

/// u1(s) = A1 sin s + B1 cos s + C1 sin 2s + D1 cos 2s + E1, with A1 = B1 = 0.
struct U1Harmonics {
    double C1;
    double D1;
    double E1;
};

/// q1(s) = A + B cos s + C sin s + D cos 2s + E sin 2s.
struct Q1Harmonics {
    double A;
    double B;
    double C;
    double D;
    double E;
};

/// Magnitudes against which tau2, eta2 and omega2 are judged degenerate.
/// Zero means only an exact zero counts.
struct DegeneracyScales {
    double tau2 = 0.0;
    double eta2 = 0.0;
    double omega2 = 0.0;
};

/// Second-order Poincare-Lindstedt data for the bifurcating cycle:
/// omega = omega0 + eps^2 omega2, tau = tau0 + eps^2 tau2, Floquet exponent
/// eta = eps^2 eta2 (first-order corrections vanish identically).
struct HopfExpansion {
    double p_star = 0.0;
    double omega0 = 0.0;
    double tau0 = 0.0;
    double omega1 = 0.0;
    double tau1 = 0.0;
    double eta1 = 0.0;
    double omega2 = 0.0;
    double tau2 = 0.0;
    double eta2 = 0.0;
    U1Harmonics u1{};
    Q1Harmonics q1{};
    DegeneracyScales scales{};
    bool degenerate = false;  // b4 or b5 negligible: eta2 vanishes
};

enum class Direction { Supercritical, Subcritical };
enum class CycleStability { Stable, Unstable };
enum class PeriodTrend { Increasing, Decreasing };

[[nodiscard]] std::string_view to_string(Direction d) noexcept;
[[nodiscard]] std::string_view to_string(CycleStability s) noexcept;
[[nodiscard]] std::string_view to_string(PeriodTrend t) noexcept;

struct BifurcationClass {
    Direction direction;
    CycleStability cycle_stability;
    PeriodTrend period_trend;
};

/// Leading-order periodic orbit at a given delay.
struct CyclePrediction {
    double tau = 0.0;
    double p_star = 0.0;
    double epsilon = 0.0;
    double amplitude = 0.0;    // = epsilon
    double omega = 0.0;        // omega0 + omega2 eps^2
    double period = 0.0;       // 2 pi / omega
    double mean_offset = 0.0;  // eps^2 E1
    double floquet = 0.0;      // eps^2 eta2
    U1Harmonics u1{};
    std::optional<std::string> warning;

    /// p* + eps sin(omega t) + eps^2 u1(omega t).
    [[nodiscard]] double sample(double t) const;

    /// Exact one-period average of sample(): p* + mean_offset.
    [[nodiscard]] double period_mean() const noexcept { return p_star + mean_offset; }
};

inline constexpr double kDegeneracyRelTolerance = 1e-12;
inline constexpr double kLocalValidityEps2 = 0.01;

[[nodiscard]] HopfExpansion hopf_expansion(const TaylorCoefficients& coeffs, const LinearAnalysis& analysis);

/// Throws DegenerateBifurcationError naming the first vanishing quantity.
[[nodiscard]] BifurcationClass classify(const HopfExpansion& exp);

/// Throws WrongSide when (tau - tau0) / tau2 < 0.
[[nodiscard]] CyclePrediction predicted_cycle(const HopfExpansion& exp, double tau);

}  // namespace hopfdual
