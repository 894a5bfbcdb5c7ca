"""Numerical witnesses for the point source hidden in the radial reduction.

* ``1/sqrt(r**2 + a**2)`` regularises ``1/r``; its radial Laplacian is
  ``-3 a**2 / (r**2 + a**2)**(5/2)``, a nascent ``-4 pi delta``.
* A candidate with ``u(0) != 0`` behaves like ``u(0)/r`` at the origin and so
  sources ``(2 pi / m) u(0) delta(r)`` in ``(H - E) psi`` (hbar = 1).
* The probability flux through a small sphere around the origin vanishes
  for ``psi = u~ / r**s`` only when ``s < 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from .engine import Trajectory


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class DivergentCandidate(ValueError):
    """u(r) does not have a finite limit at the origin."""


class IllConditionedFit(np.linalg.LinAlgError):
    pass


# ---------------------------------------------------------------------------
# regularised Laplacian


def regularized_laplacian_rhs(r, a):
    return -3.0 * a**2 / (r**2 + a**2) ** 2.5


def regularized_laplacian_check(a: float, probe_radii: Sequence[float], step_factor: float = 1e-4,
                                dps: int = 50) -> float:
    """Max relative error between ``(d2/dr2 + 2/r d/dr) (r**2+a**2)**-1/2`` by central
    differences and its closed form.

    Differences are taken in ``dps``-digit arithmetic: far from the core the two
    terms of the radial Laplacian cancel to many digits.  ``r = 0`` is replaced
    by ``1e-8``.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    worst = 0.0
    with mpmath.workdps(dps):
        A = mpmath.mpf(a)
        f = lambda x: 1 / mpmath.sqrt(x * x + A * A)  # noqa: E731
        for r in probe_radii:
            if r < 0:
                raise ValueError(f"probe radius must be non-negative, got {r}")
            R = mpmath.mpf(1e-8 if r == 0 else r)
            d = mpmath.mpf(step_factor) * min(A, R)
            fp, f0, fm = f(R + d), f(R), f(R - d)
            lhs = (fp - 2 * f0 + fm) / d**2 + (2 / R) * (fp - fm) / (2 * d)
            rhs = -3 * A**2 / (R * R + A * A) ** mpmath.mpf(2.5)
            worst = max(worst, float(abs(lhs - rhs) / abs(rhs)))
    return worst


# ---------------------------------------------------------------------------
# unit integral


def _nascent_delta(r, a):
    return 3.0 * a * a * r * r / (r * r + a * a) ** 2.5


class DeltaIntegral(NamedTuple):
    total: float
    exterior_fraction: float
    abserr: float


def delta_unit_integral(a: float, R: float, max_ratio: float = 0.1) -> DeltaIntegral:
    """``int_0^inf 3 a**2 r**2 / (r**2 + a**2)**(5/2) dr`` (exactly 1) and its share beyond ``R``."""
    if not a > 0:
        raise ValueError("a must be positive")
    if not a <= max_ratio * R:
        raise ValueError(f"need a << R (a/R <= {max_ratio}); got a={a}, R={R}")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            inner, e1 = integrate.quad(_nascent_delta, 0.0, R, args=(a,), points=[a, 10 * a],
                                       epsabs=1e-15, epsrel=1e-13, limit=200)
            outer, e2 = integrate.quad(_nascent_delta, R, np.inf, args=(a,),
                                       epsabs=1e-15, epsrel=1e-13, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge for a={a}, R={R}: {exc}", math.nan) from exc
    total = inner + outer
    return DeltaIntegral(total, outer / total, e1 + e2)


@dataclass(frozen=True)
class DeltaProbeReport:
    a_values: list[float]
    probe_radii: list[float]
    R: float
    laplacian_identity_error: list[float]
    unit_integral: list[float]
    exterior_fraction: list[float]

    @property
    def exterior_ratios(self) -> list[float]:
        """``ext(a_k) / ext(a_{k+1})``; ``(a_k / a_{k+1})**2`` when the exterior share is O(a**2)."""
        ext = self.exterior_fraction
        return [ext[i] / ext[i + 1] for i in range(len(ext) - 1)]

    def to_dict(self) -> dict:
        return {
            "a_values": self.a_values,
            "probe_radii": self.probe_radii,
            "R": self.R,
            "laplacian_identity_error": self.laplacian_identity_error,
            "unit_integral": self.unit_integral,
            "exterior_fraction": self.exterior_fraction,
            "exterior_ratios": self.exterior_ratios,
        }


def delta_probe(a_values: Sequence[float], probe_radii: Sequence[float] = (1e-8, 1e-4, 1e-2, 1.0, 10.0),
                R: float = 1.0) -> DeltaProbeReport:
    ints = [delta_unit_integral(a, R) for a in a_values]
    return DeltaProbeReport(
        a_values=[float(a) for a in a_values],
        probe_radii=[float(r) for r in probe_radii],
        R=float(R),
        laplacian_identity_error=[regularized_laplacian_check(a, probe_radii) for a in a_values],
        unit_integral=[i.total for i in ints],
        exterior_fraction=[i.exterior_fraction for i in ints],
    )


# ---------------------------------------------------------------------------
# delta source of a u(0) != 0 candidate


def delta_source_strength(u_at_origin: float, mass: float = 1.0) -> float:
    """Coefficient of ``delta3(r)`` in ``(H - E) psi`` for ``psi ~ u(0) / r`` (hbar = 1)."""
    if not mass > 0:
        raise ValueError("mass must be positive")
    if not math.isfinite(u_at_origin):
        raise DivergentCandidate("u(r) diverges at the origin; the candidate has no finite point-source strength")
    return 2.0 * math.pi * u_at_origin / mass


def regularized_source_strength(u_at_origin: float, mass: float, a: float, R: float = 1.0) -> float:
    """``-(1/2m) * integral over |x| < R of laplacian[u(0) / sqrt(r**2 + a**2)] d3x``.

    Tends to ``delta_source_strength`` as ``a -> 0`` with an ``O(a**2)`` defect.
    """
    inner = delta_unit_integral(a, R)
    ball = inner.total * (1.0 - inner.exterior_fraction)
    return -(1.0 / (2.0 * mass)) * u_at_origin * (-4.0 * math.pi) * ball


def richardson_source_strength(u_at_origin: float, mass: float, a: float, R: float = 1.0) -> float:
    """One Richardson step on ``a, a/2`` removing the ``a**2`` term."""
    s1 = regularized_source_strength(u_at_origin, mass, a, R)
    s2 = regularized_source_strength(u_at_origin, mass, a / 2, R)
    return (4.0 * s2 - s1) / 3.0


# ---------------------------------------------------------------------------
# origin extrapolation of a trajectory


class OriginLimit(NamedTuple):
    value: float
    divergent: bool
    condition: float


def extrapolate_origin(t: Trajectory, s_expected: float, n_fit: int = 8, max_condition: float = 1e12,
                       divergence_tol: float = 1e-4) -> OriginLimit:
    """Fit ``u = u0 + r**s (c0 + c1 r + c2 r**2)`` on the first nodes and return ``u0``.

    With ``s_expected < 0`` the fit is ``u0 + c r**s`` plus the complementary
    branch ``r**(1-s)`` (the two exponents of a pair sum to one) and the first
    corrections of both.  If the ``c`` term carries more than ``divergence_tol``
    of the amplitude on the fitted nodes, u blows up at the origin and the
    result is flagged divergent.
    """
    r = t.r[:n_fit]
    u = t.u[:n_fit]
    if len(r) < 4:
        raise ValueError("need at least 4 nodes to extrapolate")
    if s_expected < 0:
        sc = 1.0 - s_expected
        cols = [np.ones_like(r), r**s_expected, r ** (s_expected + 1), r**sc, r ** (sc + 1)]
    else:
        cols = [np.ones_like(r)] + [r ** (s_expected + j) for j in range(3)]
    A = np.column_stack(cols)
    scale = np.max(np.abs(A), axis=0)
    As = A / scale
    cond = float(np.linalg.cond(As))
    if not cond < max_condition:
        raise IllConditionedFit(f"origin fit is ill-conditioned (cond = {cond:.3g}); try s_expected != 0")
    coef, *_ = np.linalg.lstsq(As, u, rcond=None)
    coef = coef / scale
    if s_expected < 0:
        amp = max(np.max(np.abs(u)), np.finfo(float).tiny)
        # share of the irregular branch at the outermost fit node
        divergent = abs(coef[1]) * r[-1] ** s_expected > divergence_tol * amp
        if divergent:
            return OriginLimit(math.copysign(math.inf, coef[1]), True, cond)
    return OriginLimit(float(coef[0]), False, cond)


# ---------------------------------------------------------------------------
# flux through a vanishing sphere


@dataclass(frozen=True)
class FluxProbe:
    """``psi = u~(r) / r**s`` with ``u~ = sum_k coeffs[k] r**k``."""

    s: float
    coeffs: tuple[complex, ...]
    a0: float = 0.1
    levels: int = 7

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not self.coeffs or self.coeffs[0] == 0:
            raise ValueError("u~ must be regular with u~(0) != 0")
        if not self.a0 > 0 or self.levels < 2:
            raise ValueError("need a0 > 0 and at least two levels")

    @property
    def a_values(self) -> np.ndarray:
        return self.a0 * 2.0 ** -np.arange(self.levels)

    def surface_term(self, a) -> np.ndarray:
        """``i a**(2-2s) * 4 pi (u~ du~*/dr - u~* du~/dr)`` at ``r = a``, a real number."""
        a = np.asarray(a, dtype=float)
        return a ** (2 - 2 * self.s) * self._amplitude(a)

    def _amplitude(self, a):
        c = np.array(self.coeffs)
        u = npoly.polyval(a, c)
        du = npoly.polyval(a, npoly.polyder(c))
        return 8.0 * math.pi * np.imag(np.conj(u) * du)


@dataclass(frozen=True)
class FluxResult:
    s: float
    classification: str  # "zero", "finite" or "divergent"
    limit: float
    leading_power: float
    a_values: list[float]
    surface_values: list[float]
    richardson: list[list[float]]

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "classification": self.classification,
            "limit": self.limit,
            "leading_power": self.leading_power,
            "a_values": self.a_values,
            "surface_values": self.surface_values,
            "richardson": self.richardson,
        }

    def table_rows(self) -> list[list[float]]:
        """Rows ``a, surface value, Richardson columns...`` for CSV output."""
        rows = []
        for i, a in enumerate(self.a_values):
            rows.append([a, self.surface_values[i]] + [col[i] for col in self.richardson if i < len(col)])
        return rows


def richardson_table(values: Sequence[float], ratio: float = 2.0) -> list[list[float]]:
    """Columns of the Richardson table for ``g(a) = g0 + g1 a + g2 a**2 + ...`` sampled at ``a0 / ratio**k``.

    ``table[j][i]`` eliminates the first ``j`` powers; the last column's
    entry is the best estimate of ``g0``.
    """
    table = [list(map(float, values))]
    for j in range(1, len(values)):
        prev = table[-1]
        f = ratio**j
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    return table


def flux_limit(probe: FluxProbe, zero_tol: float = 1e-10, max_order: int = 4) -> FluxResult:
    """Limit of the surface term as the sphere radius goes to zero.

    The surface term is ``a**(2-2s) G(a)`` with ``G`` analytic, so ``G`` is
    Richardson-extrapolated to ``a = 0``.  If ``G(0)`` vanishes the next power
    is tried, up to ``max_order``.
    """
    a = probe.a_values
    amp = probe._amplitude(a)
    scale = max(float(np.max(np.abs(amp))), 1.0)
    p = 2.0 - 2.0 * probe.s
    g = amp.copy()
    order = 0
    while True:
        table = richardson_table(g)
        g0 = table[-1][0]
        if abs(g0) > zero_tol * scale:
            break
        if order == max_order:
            g0 = 0.0
            break
        order += 1
        g = g / a
    power = p + order
    if g0 == 0.0 or power > 0:
        cls, lim = "zero", 0.0
    elif power == 0:
        cls, lim = "finite", float(g0)
    else:
        cls, lim = "divergent", math.copysign(math.inf, g0)
    return FluxResult(
        s=probe.s,
        classification=cls,
        limit=lim,
        leading_power=power,
        a_values=a.tolist(),
        surface_values=probe.surface_term(a).tolist(),
        richardson=table,
    )
