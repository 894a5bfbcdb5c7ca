"""Indicial analysis of the radial equation at r = 0.

Near the origin ``u'' = [l(l+1) + 2 m lam] u / r**2`` with ``lam = lim r**2 V``.
Trying ``u ~ r**s`` gives ``s(s-1) = l(l+1) + 2 m lam``, i.e.
``s = 1/2 +- P`` with ``P**2 = (l + 1/2)**2 + 2 m lam``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .potentials import OriginClassification, OriginKind


class RefusedRegime(ValueError):
    """The indicial regime does not support the requested operation."""


class Regime(str, enum.Enum):
    REGULAR_POTENTIAL = "RegularPotential"
    SUBCRITICAL = "SubCritical"
    DEGENERATE = "Degenerate"
    FALL_TO_CENTER = "FallToCenter"


@dataclass(frozen=True)
class IndicialData:
    l: int
    mass: float
    lam: float
    p_squared: float
    P: float | None
    s_plus: float | None
    s_minus: float | None
    regime: Regime

    @property
    def V0(self) -> float:
        return -self.lam

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "mass": self.mass,
            "lambda": self.lam,
            "V0": self.V0,
            "p_squared": self.p_squared,
            "P": self.P,
            "s_plus": self.s_plus,
            "s_minus": self.s_minus,
            "regime": self.regime.value,
        }


def indicial(l: int, mass: float, cls: OriginClassification) -> IndicialData:
    """Leading exponents of the two near-origin solutions."""
    if cls.kind is OriginKind.UNSUPPORTED:
        raise RefusedRegime(
            "potential is more singular than 1/r**2 at the origin; "
            "no power-law indicial solutions exist"
        )
    if l < 0 or int(l) != l:
        raise ValueError(f"l must be a non-negative integer, got {l!r}")
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    l = int(l)
    lam = float(cls.lam)

    if lam == 0.0:
        return IndicialData(l, mass, 0.0, (l + 0.5) ** 2, l + 0.5, float(l + 1), float(-l),
                            Regime.REGULAR_POTENTIAL)

    p2 = (l + 0.5) ** 2 + 2.0 * mass * lam
    if p2 < 0:
        return IndicialData(l, mass, lam, p2, None, None, None, Regime.FALL_TO_CENTER)
    P = math.sqrt(p2)
    regime = Regime.DEGENERATE if p2 == 0 else Regime.SUBCRITICAL
    return IndicialData(l, mass, lam, p2, P, 0.5 + P, 0.5 - P, regime)


def indicial_from_P(P: float, l: int = 0, mass: float = 1.0) -> IndicialData:
    """Indicial data for an inverse-square problem with prescribed ``P``."""
    if P < 0:
        raise ValueError("P must be non-negative")
    lam = (P**2 - (l + 0.5) ** 2) / (2.0 * mass)
    regime = Regime.DEGENERATE if P == 0 else Regime.SUBCRITICAL
    return IndicialData(l, mass, lam, P**2, P, 0.5 + P, 0.5 - P, regime)


def _require_real(ix: IndicialData, what: str) -> None:
    if ix.regime is Regime.FALL_TO_CENTER:
        raise RefusedRegime(
            f"{what}: fall to the centre (2 m V0 > (l + 1/2)**2); both exponents are complex "
            "and the solutions oscillate infinitely often as r -> 0 (collapse onto the scattering centre)"
        )


# Each criterion maps the u-exponent s (u ~ r**s) to a verdict.
def differential_probability(s: float) -> bool:
    """|R|**2 r**2 dr finite at the origin: R-exponent s-1 > -1."""
    return s > 0


def local_norm(s: float) -> bool:
    """Integral of |u|**2 over (0, a) finite."""
    return s > -0.5


def flux_hermiticity(s: float) -> bool:
    """Probability flux through a vanishing sphere is zero: R ~ r**-(1-s) with 1-s < 1."""
    return (1.0 - s) < 1.0


def delta_elimination(s: float) -> bool:
    """u(0) = 0, so no point source survives the radial reduction."""
    return s > 0


CRITERIA = {
    "differential_probability": differential_probability,
    "local_norm": local_norm,
    "flux_hermiticity": flux_hermiticity,
    "delta_elimination": delta_elimination,
}


@dataclass(frozen=True)
class AdmissibilityReport:
    s_plus: float
    s_minus: float
    P: float
    regular: dict[str, bool]
    irregular: dict[str, bool]

    @property
    def disagreement_window(self) -> bool:
        return 0.5 <= self.P < 1.0

    def admits_both(self, criterion: str) -> bool:
        return self.regular[criterion] and self.irregular[criterion]

    def to_dict(self) -> dict:
        return {
            "s_plus": self.s_plus,
            "s_minus": self.s_minus,
            "P": self.P,
            "regular": dict(self.regular),
            "irregular": dict(self.irregular),
            "disagreement_window": self.disagreement_window,
        }


def admissibility(ix: IndicialData) -> AdmissibilityReport:
    """Verdict of each admissibility criterion on ``r**s_plus`` and ``r**s_minus``."""
    _require_real(ix, "admissibility")
    return AdmissibilityReport(
        s_plus=ix.s_plus,
        s_minus=ix.s_minus,
        P=ix.P,
        regular={name: crit(ix.s_plus) for name, crit in CRITERIA.items()},
        irregular={name: crit(ix.s_minus) for name, crit in CRITERIA.items()},
    )


def wronskian_limit(ix: IndicialData) -> float:
    """Wronskian ``u+ u-' - u- u+'`` of ``r**s_plus`` and ``r**s_minus`` (constant, = -2P)."""
    _require_real(ix, "wronskian_limit")
    if ix.regime is Regime.DEGENERATE:
        raise RefusedRegime("P = 0: the exponents coincide and the second solution carries log r")
    return ix.s_minus - ix.s_plus
