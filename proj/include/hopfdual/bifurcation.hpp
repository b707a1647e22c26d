#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "hopfdual/model.hpp"

namespace hopfdual {

/// Linear stability data for lambda = b2 exp(-lambda tau).
struct LinearAnalysis {
    double b2;
    double omega0;                // -b2
    double tau0;                  // -pi / (2 b2)
    std::vector<double> tau_c;    // -(2n+1) pi / (2 b2), n = 0, 2, 4, ...
    double transversality;        // Re(d lambda / d tau) at tau0
};

enum class Stability { Stable, Critical, Unstable };

[[nodiscard]] std::string_view to_string(Stability s) noexcept;

struct ComplexRoot {
    double re;
    double im;
    double residual;  // |lambda - b2 exp(-lambda tau)|

    [[nodiscard]] std::complex<double> value() const noexcept { return {re, im}; }
};

inline constexpr double kStabilityRelTolerance = 1e-9;
inline constexpr int kRootMaxIterations = 100;
inline constexpr double kRootTolerance = 1e-12;

/// Throws NonNegativeB2 when b2 >= 0, InvalidArgument when n_critical < 1.
[[nodiscard]] LinearAnalysis linear_analysis(const TaylorCoefficients& coeffs, int n_critical = 3);

[[nodiscard]] Stability is_locally_stable(const LinearAnalysis& analysis, double tau);

/// Newton iteration on g(l) = l - b2 exp(-l tau).
[[nodiscard]] ComplexRoot characteristic_root(const TaylorCoefficients& coeffs, double tau, ComplexRoot guess);

/// Largest-real-part root over a fixed grid of starting points; returned with im >= 0.
[[nodiscard]] ComplexRoot rightmost_root(const TaylorCoefficients& coeffs, double tau);

}  // namespace hopfdual
