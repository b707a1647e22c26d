#pragma once

#include <optional>

#include "hopfdual/demand.hpp"

namespace hopfdual {

/// Parameters of dp/dt = k p(t) (x(p(t - tau)) - c).
struct ModelConfig {
    double k;    // gain
    double c;    // link capacity, packets per time unit
    double tau;  // communication delay
    DemandFunction demand;

    /// Throws InvalidArgument unless k > 0, c > 0 and tau >= 0.
    void validate() const;

    [[nodiscard]] ModelConfig with_tau(double new_tau) const;
};

struct Equilibrium {
    double p_star;
    double residual;  // |x(p*) - c|
};

/// Coefficients of the cubic expansion about p* in u(t) = p(t) - p*,
///   du/dt = b1 u + b2 v + b3 u^2 + b4 u v + b5 v^2
///         + b6 u^3 + b7 u^2 v + b8 u v^2 + b9 v^3,   v = u(t - tau).
struct TaylorCoefficients {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0;
    double b6 = 0.0, b7 = 0.0, b8 = 0.0, b9 = 0.0;
    double p_star = 0.0;

    /// Coefficient by index 1..9.
    [[nodiscard]] double operator[](int i) const;

    [[nodiscard]] TaylorCoefficients scaled(double factor) const;
};

/// Relative tolerance on |x(p*) - c| / c.
inline constexpr double kEquilibriumTolerance = 1e-12;
inline constexpr int kMaxBracketDoublings = 60;

/// Solves x(p*) = c. Brackets geometrically from `initial_guess` (1 when
/// absent or outside the demand domain), then runs safeguarded Newton.
[[nodiscard]] Equilibrium find_equilibrium(const ModelConfig& config,
                                           std::optional<double> initial_guess = std::nullopt);

/// Closed-form coefficients:
///   b2 = k p* x',  b4 = k x' / 2,  b5 = k p* x'' / 2,
///   b8 = k x'' / 6, b9 = k p* x''' / 6,  b1 = b3 = b6 = b7 = 0.
[[nodiscard]] TaylorCoefficients taylor_coefficients(const ModelConfig& config, const Equilibrium& eq);

/// k p (x(p_delayed) - c).
[[nodiscard]] double rhs(const ModelConfig& config, double p, double p_delayed);

/// Direct expansion of F(u, v) = k (u + p*) (x(v + p*) - c) by finite
/// differences. Field bN holds the coefficient of the same monomial as the
/// closed form; this path never feeds the analysis pipeline.
[[nodiscard]] TaylorCoefficients numeric_taylor_oracle(const ModelConfig& config, const Equilibrium& eq);

}  // namespace hopfdual
