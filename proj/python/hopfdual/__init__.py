"""Hopf bifurcation analysis and simulation of the delayed fair-dual price equation.

The heavy lifting happens in the compiled ``_core`` extension; this package
re-exports it and adds :func:`analyze`, a one-call summary of the analytic
pipeline.
"""

from ._core import *  # noqa: F401,F403
from ._core import (
    ModelConfig,
    classify,
    find_equilibrium,
    hopf_expansion,
    linear_analysis,
    taylor_coefficients,
)

__version__ = "0.1.0"


def analyze(config: ModelConfig) -> dict:
    """Equilibrium, Taylor coefficients, Hopf point, expansion and classification."""
    eq = find_equilibrium(config)
    coeffs = taylor_coefficients(config, eq)
    lin = linear_analysis(coeffs)
    exp = hopf_expansion(coeffs, lin)
    cls = classify(exp)
    return {
        "p_star": eq.p_star,
        "taylor": coeffs.as_dict(),
        "tau0": lin.tau0,
        "omega0": lin.omega0,
        "tau_c": list(lin.tau_c),
        "transversality": lin.transversality,
        "tau2": exp.tau2,
        "eta2": exp.eta2,
        "omega2": exp.omega2,
        "direction": cls.direction.label,
        "cycle_stability": cls.cycle_stability.label,
        "period_trend": cls.period_trend.label,
    }
