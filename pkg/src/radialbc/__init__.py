"""Radial Schroedinger equation with explicit boundary conditions at the origin."""

from .diagnostics import (
    FluxProbe,
    delta_source_strength,
    delta_unit_integral,
    extrapolate_origin,
    flux_limit,
    regularized_laplacian_check,
)
from .engine import Mixed, RadialGrid, RegularOnly, Trajectory, build_grid, integrate_inward, integrate_outward, seed_origin
from .frobenius import IndicialData, Regime, RefusedRegime, admissibility, indicial, wronskian_limit
from .potentials import (
    Coulomb,
    FiniteWell,
    Harmonic,
    InverseSquare,
    OriginKind,
    PowerLaw,
    Sum,
    Tabulated,
    classify_origin,
    evaluate,
)
from .spectrum import EigenProblem, EigenResult, NotFound, count_nodes, match_defect, scan, solve

__version__ = "0.1.0"

__all__ = [
    "Coulomb", "EigenProblem", "EigenResult", "FiniteWell", "FluxProbe", "Harmonic", "IndicialData",
    "InverseSquare", "Mixed", "NotFound", "OriginKind", "PowerLaw", "RadialGrid", "RefusedRegime", "Regime",
    "RegularOnly", "Sum", "Tabulated", "Trajectory", "admissibility", "build_grid", "classify_origin",
    "count_nodes", "delta_source_strength", "delta_unit_integral", "evaluate", "extrapolate_origin",
    "flux_limit", "indicial", "integrate_inward", "integrate_outward", "match_defect",
    "regularized_laplacian_check", "scan", "seed_origin", "solve", "wronskian_limit",
]
