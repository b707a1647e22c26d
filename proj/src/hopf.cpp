#include "hopfdual/hopf.hpp"

#include <cmath>
#include <numbers>

#include "hopfdual/errors.hpp"

namespace hopfdual {

using std::numbers::pi;

std::string_view to_string(Direction d) noexcept {
    return d == Direction::Supercritical ? "supercritical" : "subcritical";
}

std::string_view to_string(CycleStability s) noexcept {
    return s == CycleStability::Stable ? "stable" : "unstable";
}

std::string_view to_string(PeriodTrend t) noexcept {
    return t == PeriodTrend::Increasing ? "increasing" : "decreasing";
}

HopfExpansion hopf_expansion(const TaylorCoefficients& coeffs, const LinearAnalysis& analysis) {
    const double b2 = coeffs.b2;
    const double b4 = coeffs.b4;
    const double b5 = coeffs.b5;
    if (!(b2 < 0.0)) {
        throw Error(ErrorCode::NonNegativeB2, "b2 must be negative for a strictly decreasing demand");
    }

    HopfExpansion out;
    out.p_star = coeffs.p_star;
    out.omega0 = analysis.omega0;
    out.tau0 = analysis.tau0;

    out.u1.C1 = -(b4 + 2.0 * b5) / (10.0 * b2);
    out.u1.D1 = (-2.0 * b4 + b5) / (10.0 * b2);
    out.u1.E1 = -b5 / (2.0 * b2);

    out.omega2 = (b4 + 2.0 * b5) * b5 / (2.0 * b2);
    out.tau2 = ((2.0 - pi) * b4 * b5 - 2.0 * pi * b5 * b5) / (4.0 * b2 * b2 * b2);
    out.eta2 = 5.0 * b4 * b5 / (2.0 * b2 * b2);

    const double r = (4.0 * b4 + 4.0 * b5) / (5.0 * b2);
    out.q1.A = -b5 / b2;
    out.q1.B = r;
    out.q1.C = 1.0 + r;
    out.q1.D = (b5 - 4.0 * b4) / (5.0 * b2);
    out.q1.E = -(2.0 * b4 + 2.0 * b5) / (5.0 * b2);

    // Sums of term magnitudes bound each closed form from above.
    const double ab2 = std::abs(b2);
    out.scales.tau2 = ((pi - 2.0) * std::abs(b4 * b5) + 2.0 * pi * b5 * b5) / (4.0 * ab2 * ab2 * ab2);
    out.scales.eta2 = 5.0 * (b4 * b4 + b5 * b5) / (4.0 * b2 * b2);
    out.scales.omega2 = (std::abs(b4) + 2.0 * std::abs(b5)) * std::abs(b5) / (2.0 * ab2);

    out.degenerate = std::abs(out.eta2) <= kDegeneracyRelTolerance * out.scales.eta2;
    return out;
}

namespace {

bool vanishes(double value, double scale) {
    return value == 0.0 || std::abs(value) <= kDegeneracyRelTolerance * scale;
}

}  // namespace

BifurcationClass classify(const HopfExpansion& exp) {
    if (vanishes(exp.tau2, exp.scales.tau2)) {
        throw DegenerateBifurcationError("tau2");
    }
    if (vanishes(exp.eta2, exp.scales.eta2)) {
        throw DegenerateBifurcationError("eta2");
    }
    if (vanishes(exp.omega2, exp.scales.omega2)) {
        throw DegenerateBifurcationError("omega2");
    }
    return {
        exp.tau2 > 0.0 ? Direction::Supercritical : Direction::Subcritical,
        exp.eta2 < 0.0 ? CycleStability::Stable : CycleStability::Unstable,
        exp.omega2 < 0.0 ? PeriodTrend::Increasing : PeriodTrend::Decreasing,
    };
}

double CyclePrediction::sample(double t) const {
    const double s = omega * t;
    const double u0 = std::sin(s);
    const double u1v = u1.C1 * std::sin(2.0 * s) + u1.D1 * std::cos(2.0 * s) + u1.E1;
    return p_star + epsilon * u0 + epsilon * epsilon * u1v;
}

CyclePrediction predicted_cycle(const HopfExpansion& exp, double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "tau must be non-negative");
    }
    const double offset = tau - exp.tau0;
    // At onset eps = 0 regardless of tau2.
    if (offset != 0.0 && vanishes(exp.tau2, exp.scales.tau2)) {
        throw DegenerateBifurcationError("tau2");
    }
    const double eps2 = offset == 0.0 ? 0.0 : offset / exp.tau2;
    if (eps2 < 0.0) {
        throw Error(ErrorCode::WrongSide, "no bifurcating cycle on this side of tau0");
    }

    CyclePrediction out;
    out.tau = tau;
    out.p_star = exp.p_star;
    out.epsilon = std::sqrt(eps2);
    out.amplitude = out.epsilon;
    out.omega = exp.omega0 + exp.omega2 * eps2;
    if (!(out.omega > 0.0)) {
        throw Error(ErrorCode::WrongSide, "predicted frequency is not positive; tau is far outside the local regime");
    }
    out.period = 2.0 * pi / out.omega;
    out.mean_offset = eps2 * exp.u1.E1;
    out.floquet = eps2 * exp.eta2;
    out.u1 = exp.u1;
    if (eps2 > kLocalValidityEps2) {
        out.warning = "eps^2 exceeds 0.01; the expansion is local and may be inaccurate";
    }
    return out;
}

}  // namespace hopfdual
