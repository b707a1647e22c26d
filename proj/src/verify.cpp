#include "hopfdual/verify.hpp"

#include <algorithm>
#include <cmath>

namespace hopfdual {

std::string_view to_string(CheckStatus s) noexcept {
    switch (s) {
        case CheckStatus::Match: return "match";
        case CheckStatus::PaperConvention: return "paper-convention";
        case CheckStatus::Mismatch: return "mismatch";
    }
    return "unknown";
}

namespace {

// Total degree of the monomial carried by b_i.
int degree(int i) {
    if (i <= 2) {
        return 1;
    }
    return i <= 5 ? 2 : 3;
}

}  // namespace

std::vector<CoefficientCheck> verify_coefficients(const ModelConfig& config) {
    const Equilibrium eq = find_equilibrium(config);
    const TaylorCoefficients closed = taylor_coefficients(config, eq);
    const TaylorCoefficients oracle = numeric_taylor_oracle(config, eq);

    // Coefficients that vanish analytically are compared against the size a
    // generic term of the same degree would have: |b2| / p*^(d-1).
    const double base = std::max(std::abs(closed.b2), std::abs(oracle.b2));

    std::vector<CoefficientCheck> out;
    for (int i = 1; i <= 9; ++i) {
        CoefficientCheck chk{};
        chk.index = i;
        chk.closed_form = closed[i];
        chk.oracle = oracle[i];
        const double natural = base / std::pow(eq.p_star, degree(i) - 1);
        const double diff = std::abs(chk.closed_form - chk.oracle);
        const double mag = std::max(std::abs(chk.closed_form), std::abs(chk.oracle));
        // Numerically differentiated demands leave roundoff where a derivative
        // is exactly zero; no ratio is reported for such coefficients.
        const bool negligible = std::abs(chk.closed_form) <= 1e-9 * natural;
        chk.rel_diff = diff / (negligible ? natural : std::abs(chk.closed_form));
        if (!negligible) {
            chk.ratio = chk.oracle / chk.closed_form;
        }

        const bool match = diff <= kOracleRelTolerance * mag + 1e-9 * natural;
        const double expected_ratio = i == 4 ? 2.0 : (i == 8 ? 3.0 : 0.0);
        if (match) {
            chk.status = CheckStatus::Match;
        } else if (expected_ratio != 0.0 && chk.ratio &&
                   std::abs(*chk.ratio - expected_ratio) <= kConventionRatioTolerance) {
            chk.status = CheckStatus::PaperConvention;
        } else {
            chk.status = CheckStatus::Mismatch;
        }
        out.push_back(chk);
    }
    return out;
}

bool all_consistent(const std::vector<CoefficientCheck>& checks) noexcept {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CoefficientCheck& c) { return c.status == CheckStatus::Mismatch; });
}

}  // namespace hopfdual
