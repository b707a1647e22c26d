#include "hopfdual/bifurcation.hpp"

#include <cmath>
#include <numbers>

#include "hopfdual/errors.hpp"

namespace hopfdual {

using std::numbers::pi;

std::string_view to_string(Stability s) noexcept {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Critical: return "critical";
        case Stability::Unstable: return "unstable";
    }
    return "unknown";
}

LinearAnalysis linear_analysis(const TaylorCoefficients& coeffs, int n_critical) {
    const double b2 = coeffs.b2;
    if (!(b2 < 0.0)) {
        throw Error(ErrorCode::NonNegativeB2, "b2 must be negative for a strictly decreasing demand");
    }
    if (n_critical < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_critical must be at least 1");
    }
    LinearAnalysis out;
    out.b2 = b2;
    out.omega0 = -b2;
    out.tau0 = -pi / (2.0 * b2);
    out.tau_c.reserve(static_cast<std::size_t>(n_critical));
    for (int i = 0; i < n_critical; ++i) {
        const int n = 2 * i;
        out.tau_c.push_back(-(2 * n + 1) * pi / (2.0 * b2));
    }
    out.transversality = b2 * b2 / (1.0 + pi * pi / 4.0);
    return out;
}

Stability is_locally_stable(const LinearAnalysis& analysis, double tau) {
    const double tol = kStabilityRelTolerance * analysis.tau0;
    if (std::abs(tau - analysis.tau0) <= tol) {
        return Stability::Critical;
    }
    return tau < analysis.tau0 ? Stability::Stable : Stability::Unstable;
}

ComplexRoot characteristic_root(const TaylorCoefficients& coeffs, double tau, ComplexRoot guess) {
    if (!(tau >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tau must be non-negative");
    }
    if (!std::isfinite(guess.re) || !std::isfinite(guess.im)) {
        throw Error(ErrorCode::InvalidArgument, "initial guess must be finite");
    }
    const double b2 = coeffs.b2;
    std::complex<double> lambda = guess.value();
    for (int iter = 0; iter < kRootMaxIterations; ++iter) {
        const std::complex<double> e = std::exp(-lambda * tau);
        const std::complex<double> g = lambda - b2 * e;
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            break;
        }
        if (std::abs(g) <= kRootTolerance) {
            return {lambda.real(), lambda.imag(), std::abs(g)};
        }
        const std::complex<double> dg = 1.0 + b2 * tau * e;
        if (std::abs(dg) < 1e-14) {
            throw Error(ErrorCode::SingularJacobian, "characteristic map has a vanishing derivative");
        }
        lambda -= g / dg;
    }
    throw Error(ErrorCode::NoConvergence, "characteristic root iteration did not converge");
}

ComplexRoot rightmost_root(const TaylorCoefficients& coeffs, double tau) {
    if (!(tau >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "rightmost_root requires tau >= 0");
    }
    if (tau == 0.0) {
        return {coeffs.b2, 0.0, 0.0};
    }
    const double a = std::abs(coeffs.b2);
    const double alphas[] = {-2.0 * a, 0.0, a};
    const double omegas[] = {0.0, pi / (2.0 * tau), pi / tau, 2.0 * pi / tau};

    std::vector<ComplexRoot> roots;
    for (double alpha : alphas) {
        for (double omega : omegas) {
            ComplexRoot r{};
            try {
                r = characteristic_root(coeffs, tau, {alpha, omega, 0.0});
            } catch (const Error&) {
                continue;
            }
            r.im = std::abs(r.im);
            bool seen = false;
            for (const auto& q : roots) {
                if (std::abs(q.value() - r.value()) < 1e-8) {
                    seen = true;
                    break;
                }
            }
            if (!seen) {
                roots.push_back(r);
            }
        }
    }
    if (roots.empty()) {
        throw Error(ErrorCode::NoConvergence, "no characteristic root found from the guess grid");
    }
    const ComplexRoot* best = &roots.front();
    for (const auto& r : roots) {
        if (r.re > best->re) {
            best = &r;
        }
    }
    return *best;
}

}  // namespace hopfdual
