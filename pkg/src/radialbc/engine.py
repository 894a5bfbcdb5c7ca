"""Numerov integration of ``u'' = [l(l+1)/r**2 + 2m(V - E)] u`` on a uniform grid.

Near the origin the solution is not sampled by the grid; instead the
Frobenius series of the requested branch (or mixture of branches) supplies
the first values and Numerov takes over from there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .frobenius import IndicialData, Regime, RefusedRegime, admissibility
from .potentials import Potential

RESCALE_THRESHOLD = 1e150
MIN_POINTS = 16
# Singular (non-integer) branches are seeded out to this many steps from r_min
# so the first Numerov steps see h/r <= 1/SEED_STEPS.  The irregular branch
# amplifies seeding error by r_start**(-2P), hence the generous depth.
SEED_STEPS = 256
SERIES_TERMS = 120


class GridError(ValueError):
    pass


class NoDecayingTail(ValueError):
    """Inward integration requested at an energy with no classically forbidden tail."""


class DivergedTrajectory(ArithmeticError):
    def __init__(self, message: str, last_valid: int, direction: str):
        super().__init__(message)
        self.last_valid = last_valid
        self.direction = direction


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    n_points: int

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def r(self) -> np.ndarray:
        return self.r_min + self.h * np.arange(self.n_points)

    def index_of(self, radius: float) -> int:
        i = int(round((radius - self.r_min) / self.h))
        return min(max(i, 0), self.n_points - 1)

    def to_dict(self) -> dict:
        return {"rmin": self.r_min, "rmax": self.r_max, "npoints": self.n_points, "h": self.h}


def build_grid(r_min: float, r_max: float, n_points: int) -> RadialGrid:
    if not r_min > 0:
        raise GridError(f"r_min must be positive (got {r_min})")
    if not r_max > r_min:
        raise GridError(f"r_max must exceed r_min (got r_min={r_min}, r_max={r_max})")
    if int(n_points) != n_points or n_points < MIN_POINTS:
        raise GridError(f"need an integer n_points >= {MIN_POINTS} (got {n_points})")
    return RadialGrid(float(r_min), float(r_max), int(n_points))


@dataclass(frozen=True)
class RegularOnly:
    """``u ~ r**s_plus``: the only choice with u(0) = 0 in every supported regime."""

    def to_dict(self) -> dict:
        return {"kind": "regular"}


@dataclass(frozen=True)
class Mixed:
    """``u ~ r**s_plus + g (r/r_ref)**(s_minus - s_plus) r**s_plus`` near the origin.

    The admixture ratio of the irregular branch is ``c2/c1 = g * r_ref**(s_plus - s_minus)``.
    """

    g: float
    r_ref: float = 1.0

    def __post_init__(self):
        if not self.r_ref > 0:
            raise ValueError("r_ref must be positive")

    def admixture(self, ix: IndicialData) -> float:
        return self.g * self.r_ref ** (ix.s_plus - ix.s_minus)

    def to_dict(self) -> dict:
        return {"kind": "mixed", "g": self.g, "r_ref": self.r_ref}


BoundaryCondition = Union[RegularOnly, Mixed]


def check_bc(bc: BoundaryCondition, ix: IndicialData) -> None:
    """Raise RefusedRegime if ``bc`` cannot be imposed for this indicial regime."""
    if ix.regime is Regime.FALL_TO_CENTER:
        raise RefusedRegime(
            "fall to the centre: 2 m V0 > (l + 1/2)**2, exponents are complex (collapse onto the centre)"
        )
    if isinstance(bc, Mixed):
        if ix.regime is Regime.DEGENERATE:
            raise RefusedRegime("P = 0: the irregular branch carries log r; mixed seeding not supported")
        if not admissibility(ix).irregular["local_norm"]:
            raise RefusedRegime(
                f"irregular branch r**{ix.s_minus:g} is not locally square integrable; "
                "it is rejected by every admissibility criterion"
            )


# ---------------------------------------------------------------------------
# Frobenius series


@dataclass(frozen=True)
class FrobeniusBranch:
    """``u = r**s * sum_j a_j r**j``, truncated before a resonance if one occurs."""

    s: float
    coeffs: np.ndarray
    truncated_at: int | None = None

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r**self.s * np.polynomial.polynomial.polyval(r, self.coeffs)


def frobenius_branch(s: float, series: dict[int, float], mass: float, E: float,
                     n_terms: int = SERIES_TERMS) -> FrobeniusBranch:
    """Coefficients from ``j (2s + j - 1) a_j = 2m sum_{k>=1} v_k a_{j-k} - 2mE a_{j-2}``."""
    drive = {k: 2.0 * mass * v for k, v in series.items() if k >= 1}
    drive[2] = drive.get(2, 0.0) - 2.0 * mass * E
    a = np.zeros(n_terms)
    a[0] = 1.0
    for j in range(1, n_terms):
        rhs = sum(c * a[j - k] for k, c in drive.items() if k <= j)
        denom = j * (2.0 * s + j - 1.0)
        if abs(denom) < 1e-12:
            if rhs != 0.0:
                # logarithmic term needed: keep the terms before the resonance
                return FrobeniusBranch(s, a[:j].copy(), truncated_at=j)
            continue
        a[j] = rhs / denom
        if not np.isfinite(a[j]):
            return FrobeniusBranch(s, a[:j].copy(), truncated_at=j)
    return FrobeniusBranch(s, a)


def _smooth_exponent(s: float) -> bool:
    return s >= 0 and float(s).is_integer()


def seed_start_index(bc: BoundaryCondition, ix: IndicialData, grid: RadialGrid,
                     series_radius: float = math.inf) -> int:
    """First node where Numerov takes over from the series (0 for smooth branches)."""
    exps = [ix.s_plus] if isinstance(bc, RegularOnly) or bc.g == 0 else [ix.s_plus, ix.s_minus]
    if all(_smooth_exponent(s) for s in exps):
        return 0
    start = SEED_STEPS
    if math.isfinite(series_radius):
        start = min(start, int((0.5 * series_radius - grid.r_min) / grid.h))
    return min(max(start, 0), grid.n_points - 3)


def near_origin_solution(bc: BoundaryCondition, ix: IndicialData, p: Potential, E: float, r) -> np.ndarray:
    """Series solution selected by ``bc`` (unit coefficient on the regular branch)."""
    check_bc(bc, ix)
    series = p.origin_series()
    if series is None:
        raise RefusedRegime("potential is more singular than 1/r**2")
    u = frobenius_branch(ix.s_plus, series, ix.mass, E)(r)
    if isinstance(bc, Mixed) and bc.g != 0:
        u = u + bc.admixture(ix) * frobenius_branch(ix.s_minus, series, ix.mass, E)(r)
    return u


def seed_origin(bc: BoundaryCondition, ix: IndicialData, p: Potential, E: float,
                grid: RadialGrid, start: int = 0) -> tuple[float, float]:
    """u at grid nodes ``start`` and ``start + 1`` from the near-origin series."""
    r = grid.r[start:start + 2]
    u0, u1 = near_origin_solution(bc, ix, p, E, r)
    return float(u0), float(u1)


# ---------------------------------------------------------------------------
# Numerov


@dataclass(frozen=True)
class Trajectory:
    """Solution samples on grid nodes ``offset .. offset + len(values) - 1``.

    The true solution is proportional to ``values * exp(log_scale)``; the
    per-node ``log_scale`` records overflow rescaling so that signs and
    ratios survive arbitrarily large growth.
    """

    grid: RadialGrid
    values: np.ndarray
    log_scale: np.ndarray
    direction: str
    energy: float
    offset: int = 0
    rescale_events: int = 0

    @property
    def r(self) -> np.ndarray:
        return self.grid.r[self.offset:self.offset + len(self.values)]

    @property
    def u(self) -> np.ndarray:
        """Samples in the units of the most rescaled segment (earlier ones may underflow)."""
        return self.values * np.exp(self.log_scale - self.log_scale.max())

    def __len__(self) -> int:
        return len(self.values)

    def log_abs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.values)) + self.log_scale

    def to_csv(self, path) -> None:
        np.savetxt(path, np.column_stack([self.r, self.u]), delimiter=",",
                   header="r,u", comments="", fmt="%.17g")


def numerov_f(p: Potential, l: int, mass: float, E: float, r: np.ndarray) -> np.ndarray:
    """``f`` in ``u'' = f u``."""
    return l * (l + 1) / r**2 + 2.0 * mass * (p(r) - E)


def _numerov(f: np.ndarray, h: float, i0: int, i1: int, u0: float, u1: float, stop: int,
             threshold: float | None, direction: str):
    """Run the recursion from nodes (i0, i1) until node ``stop`` inclusive.

    Returns (values, log_scale, rescale_events) ordered along the integration.
    """
    if threshold is None:
        threshold = RESCALE_THRESHOLD
    step = i1 - i0
    w = (1.0 - (h * h / 12.0) * f).tolist()
    vals = [u0, u1]
    logs = [0.0, 0.0]
    log_offset = 0.0
    events = 0
    a, b = u0, u1
    i = i1
    while i != stop:
        wn = w[i + step]
        c = ((12.0 - 10.0 * w[i]) * b - w[i - step] * a) / wn if wn != 0.0 else math.inf
        if not math.isfinite(c):
            raise DivergedTrajectory(
                f"{direction} Numerov produced a non-finite value at node {i + step}",
                last_valid=i, direction=direction)
        if abs(c) > threshold:
            scale = abs(c)
            b /= scale
            c /= scale
            log_offset += math.log(scale)
            events += 1
        vals.append(c)
        logs.append(log_offset)
        a, b = b, c
        i += step
    return vals, logs, events


def integrate_outward(p: Potential, l: int, mass: float, E: float, grid: RadialGrid,
                      seed: tuple[float, float], start: int = 0, stop: int | None = None,
                      rescale_threshold: float | None = None, f: np.ndarray | None = None) -> Trajectory:
    """Numerov outward from ``seed`` at nodes ``start, start+1`` to node ``stop`` (default: last)."""
    n = grid.n_points
    stop = n - 1 if stop is None else stop
    if not (0 <= start and start + 1 <= stop <= n - 1):
        raise GridError(f"bad outward range start={start}, stop={stop} for {n} points")
    if not all(map(math.isfinite, seed)):
        raise ValueError(f"seed must be finite, got {seed}")
    if f is None:
        f = numerov_f(p, l, mass, E, grid.r)
    vals, logs, events = _numerov(f, grid.h, start, start + 1, float(seed[0]), float(seed[1]),
                                  stop, rescale_threshold, "outward")
    return Trajectory(grid, np.array(vals), np.array(logs), "outward", E, offset=start,
                      rescale_events=events)


def tail_decay_rate(p: Potential, l: int, mass: float, E: float, grid: RadialGrid) -> float:
    r = grid.r_max
    q = l * (l + 1) / r**2 + 2.0 * mass * (float(p(r)) - E)
    if not q > 0:
        raise NoDecayingTail(
            f"E = {E} is not below the potential at r_max = {r}; no decaying tail to seed from")
    return math.sqrt(q)


def integrate_inward(p: Potential, l: int, mass: float, E: float, grid: RadialGrid,
                     stop: int = 0, epsilon: float = 1e-20,
                     rescale_threshold: float | None = None, f: np.ndarray | None = None) -> Trajectory:
    """Numerov inward from r_max with the local decay seed ``u(r_max - h) = eps * exp(kappa h)``."""
    kappa = tail_decay_rate(p, l, mass, E, grid)
    n = grid.n_points
    if not 0 <= stop <= n - 2:
        raise GridError(f"bad inward stop {stop} for {n} points")
    if f is None:
        f = numerov_f(p, l, mass, E, grid.r)
    vals, logs, events = _numerov(f, grid.h, n - 1, n - 2, epsilon, epsilon * math.exp(kappa * grid.h),
                                  stop, rescale_threshold, "inward")
    return Trajectory(grid, np.array(vals[::-1]), np.array(logs[::-1]), "inward", E, offset=stop,
                      rescale_events=events)


def shoot_outward(p: Potential, ix: IndicialData, bc: BoundaryCondition, E: float, grid: RadialGrid,
                  stop: int | None = None, rescale_threshold: float | None = None,
                  f: np.ndarray | None = None) -> Trajectory:
    """Outward solution over nodes 0..stop: series up to the seed nodes, Numerov after."""
    start = seed_start_index(bc, ix, grid, p.series_radius())
    stop = grid.n_points - 1 if stop is None else stop
    stop = max(stop, start + 1)
    head = near_origin_solution(bc, ix, p, E, grid.r[:start + 2])
    if not np.all(np.isfinite(head)):
        raise DivergedTrajectory("series seed is not finite", last_valid=0, direction="outward")
    if stop == start + 1:
        return Trajectory(grid, head, np.zeros(len(head)), "outward", E)
    t = integrate_outward(p, ix.l, ix.mass, E, grid, (head[start], head[start + 1]), start=start,
                          stop=stop, rescale_threshold=rescale_threshold, f=f)
    return Trajectory(grid, np.concatenate([head[:start], t.values]),
                      np.concatenate([np.zeros(start), t.log_scale]), "outward", E,
                      rescale_events=t.rescale_events)
