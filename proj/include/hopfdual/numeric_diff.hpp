#pragma once

// Central finite differences with two levels of Richardson extrapolation.
//
// The raw stencils are second order in h. Combining D(h), D(h/2), D(h/4)
// cancels the h^2 and h^4 terms, leaving O(h^6) truncation error, so the
// default step is taken fairly large (eps^(1/(n+6)) relative to |x|) to keep
// roundoff amplification eps/h^n small.

#include <cmath>
#include <limits>

#include "hopfdual/errors.hpp"

namespace hopfdual::numeric {

/// Half-width of the widest raw stencil, in units of h.
[[nodiscard]] constexpr double stencil_reach(int order) noexcept { return order >= 3 ? 2.0 : 1.0; }

[[nodiscard]] inline double default_step(double x, int order) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(std::abs(x), 1e-300);
    return scale * std::pow(eps, 1.0 / (order + 6));
}

template <class F>
[[nodiscard]] double central_difference(F&& f, double x, int order, double h) {
    switch (order) {
        case 0: return f(x);
        case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
        default: throw Error(ErrorCode::InvalidArgument, "derivative order must be in [0, 3]");
    }
}

template <class F>
[[nodiscard]] double richardson_derivative(F&& f, double x, int order, double h) {
    if (order == 0) {
        return f(x);
    }
    const double d1 = central_difference(f, x, order, h);
    const double d2 = central_difference(f, x, order, 0.5 * h);
    const double d4 = central_difference(f, x, order, 0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

/// Derivative of f at x, shrinking the step so the stencil stays strictly
/// inside (lo, hi).
template <class F>
[[nodiscard]] double derivative_in_domain(F&& f, double x, int order, double lo, double hi) {
    if (!(x > lo && x < hi)) {
        throw Error(ErrorCode::DomainViolation, "differentiation point outside the function domain");
    }
    double h = default_step(x, order);
    const double room = std::min(x - lo, hi - x);
    const double reach = stencil_reach(order);
    if (reach * h >= room) {
        h = 0.5 * room / reach;
    }
    return richardson_derivative(f, x, order, h);
}

}  // namespace hopfdual::numeric
