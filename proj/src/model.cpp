#include "hopfdual/model.hpp"

#include <cmath>
#include <string>

#include "hopfdual/errors.hpp"
#include "hopfdual/numeric_diff.hpp"

namespace hopfdual {

void ModelConfig::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw Error(ErrorCode::InvalidArgument, "gain k must be positive");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::InvalidArgument, "capacity c must be positive");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidArgument, "delay tau must be non-negative");
    }
}

ModelConfig ModelConfig::with_tau(double new_tau) const {
    ModelConfig copy = *this;
    copy.tau = new_tau;
    return copy;
}

double TaylorCoefficients::operator[](int i) const {
    switch (i) {
        case 1: return b1;
        case 2: return b2;
        case 3: return b3;
        case 4: return b4;
        case 5: return b5;
        case 6: return b6;
        case 7: return b7;
        case 8: return b8;
        case 9: return b9;
        default: throw Error(ErrorCode::InvalidArgument, "coefficient index must be in [1, 9]");
    }
}

TaylorCoefficients TaylorCoefficients::scaled(double factor) const {
    TaylorCoefficients out = *this;
    for (double* b : {&out.b1, &out.b2, &out.b3, &out.b4, &out.b5, &out.b6, &out.b7, &out.b8, &out.b9}) {
        *b *= factor;
    }
    return out;
}

namespace {

// Moves p by a factor of two towards `up`, or halfway to the domain edge
// when the doubling would leave it.
double expand(const DemandFunction& demand, double p, bool up) {
    if (up) {
        const double next = 2.0 * p;
        return next < demand.domain_hi() ? next : 0.5 * (p + demand.domain_hi());
    }
    const double next = 0.5 * p;
    return next > demand.domain_lo() ? next : 0.5 * (p + demand.domain_lo());
}

double starting_point(const DemandFunction& demand, std::optional<double> guess) {
    if (guess && demand.contains(*guess)) {
        return *guess;
    }
    if (demand.contains(1.0)) {
        return 1.0;
    }
    const double lo = demand.domain_lo();
    const double hi = demand.domain_hi();
    if (std::isfinite(hi)) {
        return 0.5 * (std::max(lo, 0.0) + hi);
    }
    return lo > 0.0 ? 2.0 * lo : 1.0;
}

}  // namespace

Equilibrium find_equilibrium(const ModelConfig& config, std::optional<double> initial_guess) {
    config.validate();
    const DemandFunction& x = config.demand;
    const double c = config.c;
    const auto g = [&](double p) { return x(p) - c; };
    const double tol = kEquilibriumTolerance * c;

    double p = starting_point(x, initial_guess);
    double gp = g(p);
    if (std::abs(gp) <= tol) {
        return {p, std::abs(gp)};
    }

    // x decreasing: g > 0 means the root lies at larger prices.
    const bool up = gp > 0.0;
    double lo = p;
    double hi = p;
    double glo = gp;
    double ghi = gp;
    bool bracketed = false;
    for (int i = 0; i < kMaxBracketDoublings; ++i) {
        const double next = expand(x, up ? hi : lo, up);
        if (!x.contains(next) || next == (up ? hi : lo)) {
            break;
        }
        const double gn = g(next);
        if (up) {
            lo = hi;
            glo = ghi;
            hi = next;
            ghi = gn;
        } else {
            hi = lo;
            ghi = glo;
            lo = next;
            glo = gn;
        }
        if (std::abs(gn) <= tol) {
            return {next, std::abs(gn)};
        }
        if ((glo > 0.0) != (ghi > 0.0)) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        throw Error(ErrorCode::NoBracket, "no sign change of x(p) - c found for " + x.name());
    }
    if (!(glo > 0.0 && ghi < 0.0)) {
        throw Error(ErrorCode::NoBracket, "demand " + x.name() + " is not decreasing across the bracket");
    }

    // Safeguarded Newton: g(lo) > 0 > g(hi).
    p = 0.5 * (lo + hi);
    for (int iter = 0; iter < 400; ++iter) {
        const double gv = g(p);
        if (std::abs(gv) <= tol) {
            // One more Newton step usually lands within an ulp or two of the root.
            const double polished = p - gv / x.d1(p);
            if (polished > lo && polished < hi) {
                const double gp2 = g(polished);
                if (std::abs(gp2) < std::abs(gv)) {
                    return {polished, std::abs(gp2)};
                }
            }
            return {p, std::abs(gv)};
        }
        if (gv > 0.0) {
            lo = p;
        } else {
            hi = p;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            return {p, std::abs(gv)};
        }
        const double slope = x.d1(p);
        double next = p - gv / slope;
        if (!(slope < 0.0) || !(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        p = next;
    }
    throw Error(ErrorCode::NoConvergence, "equilibrium iteration did not converge");
}

TaylorCoefficients taylor_coefficients(const ModelConfig& config, const Equilibrium& eq) {
    config.validate();
    const double p = eq.p_star;
    const double k = config.k;
    const double x1 = config.demand.d1(p);
    const double x2 = config.demand.d2(p);
    const double x3 = config.demand.d3(p);

    TaylorCoefficients out;
    out.p_star = p;
    out.b2 = k * p * x1;
    out.b4 = 0.5 * k * x1;
    out.b5 = 0.5 * k * p * x2;
    out.b8 = k * x2 / 6.0;
    out.b9 = k * p * x3 / 6.0;
    return out;
}

double rhs(const ModelConfig& config, double p, double p_delayed) {
    return config.k * p * (config.demand(p_delayed) - config.c);
}

TaylorCoefficients numeric_taylor_oracle(const ModelConfig& config, const Equilibrium& eq) {
    config.validate();
    const double ps = eq.p_star;
    const DemandFunction& x = config.demand;
    const double k = config.k;
    const double c = config.c;

    const auto F = [&](double u, double v) { return k * (u + ps) * (x(v + ps) - c); };

    // v ranges over the shifted demand domain; u is unrestricted.
    const double vlo = x.domain_lo() - ps;
    const double vhi = x.domain_hi() - ps;
    // Steps scale with p* since both expansions are taken at zero.
    const auto partial = [&](int du, int dv) {
        const auto inner = [&](double u) {
            if (dv == 0) {
                return F(u, 0.0);
            }
            double h = numeric::default_step(ps, dv);
            const double room = std::min(-vlo, vhi);
            const double reach = numeric::stencil_reach(dv);
            if (reach * h >= room) {
                h = 0.5 * room / reach;
            }
            return numeric::richardson_derivative([&](double v) { return F(u, v); }, 0.0, dv, h);
        };
        if (du == 0) {
            return inner(0.0);
        }
        return numeric::richardson_derivative(inner, 0.0, du, numeric::default_step(ps, du));
    };

    TaylorCoefficients out;
    out.p_star = ps;
    out.b1 = partial(1, 0);
    out.b2 = partial(0, 1);
    out.b3 = partial(2, 0) / 2.0;
    out.b4 = partial(1, 1);
    out.b5 = partial(0, 2) / 2.0;
    out.b6 = partial(3, 0) / 6.0;
    out.b7 = partial(2, 1) / 2.0;
    out.b8 = partial(1, 2) / 2.0;
    out.b9 = partial(0, 3) / 6.0;
    return out;
}

}  // namespace hopfdual
