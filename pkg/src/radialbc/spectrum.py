"""Bound states of the radial equation by node-bracketed two-sided shooting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .engine import (
    BoundaryCondition,
    DivergedTrajectory,
    Mixed,
    RadialGrid,
    RegularOnly,
    Trajectory,
    build_grid,
    check_bc,
    integrate_inward,
    seed_start_index,
    shoot_outward,
)
from .frobenius import IndicialData, indicial
from .potentials import InverseSquare, OriginClassification, Potential, Sum, classify_origin


class NotFound(LookupError):
    """No eigenvalue with the requested node count in the energy window."""


DEFAULT_GRID = (1e-6, 50.0, 20001)


@dataclass(frozen=True)
class EigenProblem:
    potential: Potential
    l: int = 0
    mass: float = 1.0
    bc: BoundaryCondition = field(default_factory=RegularOnly)
    grid: RadialGrid = field(default_factory=lambda: build_grid(*DEFAULT_GRID))
    energy_window: tuple[float, float] | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.energy_window is not None:
            lo, hi = self.energy_window
            if not lo < hi:
                raise ValueError(f"energy window must satisfy E_lo < E_hi, got {self.energy_window}")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    @cached_property
    def origin(self) -> OriginClassification:
        return classify_origin(self.potential)

    @cached_property
    def ix(self) -> IndicialData:
        return indicial(self.l, self.mass, self.origin)

    @cached_property
    def r(self) -> np.ndarray:
        return self.grid.r

    @cached_property
    def q(self) -> np.ndarray:
        """``l(l+1)/r**2 + 2 m V`` on the grid (``f = q - 2 m E``)."""
        return self.l * (self.l + 1) / self.r**2 + 2.0 * self.mass * self.potential(self.r)

    @cached_property
    def v_eff(self) -> np.ndarray:
        return self.q / (2.0 * self.mass)

    @cached_property
    def window(self) -> tuple[float, float]:
        if self.energy_window is not None:
            lo, hi = map(float, self.energy_window)
            if not hi < self.v_eff[-1]:
                raise ValueError(f"energy window top {hi:g} is not below V_eff(r_max) = {self.v_eff[-1]:g}; "
                                 "bound states need a decaying tail")
            return lo, hi
        start = max(seed_start_index(self.bc, self.ix, self.grid, self.potential.series_radius()), 1)
        lo = float(np.min(self.v_eff[start:]))
        if isinstance(self.bc, Mixed):
            lo = min(lo, -((10.0 / self.bc.r_ref) ** 2) / (2.0 * self.mass))
        hi = float(self.v_eff[-1])
        hi -= 1e-12 * max(1.0, abs(hi))
        return lo, hi

    def f(self, E: float) -> np.ndarray:
        return self.q - 2.0 * self.mass * E

    def to_dict(self) -> dict:
        return {
            "potential": self.potential.to_spec(),
            "l": self.l,
            "mass": self.mass,
            "bc": self.bc.to_dict(),
            "grid": self.grid.to_dict(),
            "energy_window": list(self.window),
            "tol": self.tol,
        }


@dataclass(frozen=True)
class EigenResult:
    energy: float
    nodes: int
    samples: Trajectory
    norm: float
    match_defect: float
    match_radius: float
    rescale_events: int
    bc_used: BoundaryCondition
    evaluations: int

    @property
    def r(self) -> np.ndarray:
        return self.samples.r

    @property
    def u(self) -> np.ndarray:
        return self.samples.u

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "nodes": self.nodes,
            "norm": self.norm,
            "match_defect": self.match_defect,
            "match_radius": self.match_radius,
            "rescale_events": self.rescale_events,
            "bc": self.bc_used.to_dict(),
            "evaluations": self.evaluations,
        }


def count_nodes(t: Trajectory) -> int:
    """Strict sign changes of u over the trajectory, skipping the first (seeded) node and exact zeros."""
    s = np.sign(t.values[1:])
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def normalize(r: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, float]:
    """Scale u so that the composite Simpson value of int u**2 dr is 1."""
    norm = float(simpson(u * u, x=r))
    return u / math.sqrt(norm), norm


def matching_index(prob: EigenProblem, E: float) -> int:
    """Outermost classical turning point; without one, near the decay length ``1/kappa``."""
    start = seed_start_index(prob.bc, prob.ix, prob.grid, prob.potential.series_radius())
    lo, hi = start + 2, prob.grid.n_points - 3
    allowed = np.nonzero(prob.v_eff[lo:hi + 1] < E)[0]
    if allowed.size:
        return int(lo + allowed[-1])
    tail = prob.v_eff[-1] - E
    target = 1.0 / math.sqrt(2.0 * prob.mass * tail) if tail > 0 else 0.5 * (prob.grid.r_min + prob.grid.r_max)
    target = min(target, 0.5 * (prob.grid.r_min + prob.grid.r_max))
    return min(max(prob.grid.index_of(target), lo), hi)


def _log_derivative(t: Trajectory, i: int) -> float:
    j = i - t.offset
    v, ls = t.values, t.log_scale
    up = v[j + 1] * math.exp(ls[j + 1] - ls[j])
    dn = v[j - 1] * math.exp(ls[j - 1] - ls[j])
    return (up - dn) / (2.0 * t.grid.h * v[j])


def _refuse_if_needed(prob: EigenProblem) -> None:
    check_bc(prob.bc, prob.ix)


class _Shooter:
    """Caches outward node counts for one problem."""

    def __init__(self, prob: EigenProblem):
        self.prob = prob
        self.evaluations = 0
        self._nodes: dict[float, int] = {}

    def outward(self, E: float, stop: int | None = None) -> Trajectory:
        self.evaluations += 1
        p = self.prob
        return shoot_outward(p.potential, p.ix, p.bc, E, p.grid, stop=stop, f=p.f(E))

    def nodes(self, E: float) -> int:
        if E not in self._nodes:
            try:
                self._nodes[E] = count_nodes(self.outward(E))
            except DivergedTrajectory as exc:
                raise NotFound(f"outward integration diverged at E={E}: {exc}") from exc
        return self._nodes[E]

    def defect(self, E: float, m: int) -> float:
        p = self.prob
        try:
            out = self.outward(E, stop=m + 1)
        except DivergedTrajectory:
            return math.inf
        try:
            inn = integrate_inward(p.potential, p.l, p.mass, E, p.grid, stop=m - 1, f=p.f(E))
        except DivergedTrajectory:
            return -math.inf
        self.evaluations += 1
        if out.values[m] == 0 or inn.values[1] == 0:
            return math.copysign(math.inf, out.values[m + 1] - out.values[m - 1])
        return _log_derivative(out, m) - _log_derivative(inn, m)


def match_defect(prob: EigenProblem, E: float, match_index: int | None = None) -> float:
    """``u'/u`` (outward) minus ``u'/u`` (inward) at the matching node.

    A diverged outward (inward) integration yields ``+inf`` (``-inf``).
    """
    _refuse_if_needed(prob)
    m = matching_index(prob, E) if match_index is None else match_index
    return _Shooter(prob).defect(E, m)


def _pure_inverse_square(p: Potential) -> bool:
    if isinstance(p, InverseSquare):
        return True
    return isinstance(p, Sum) and all(_pure_inverse_square(q) for q in p.parts)


def _assemble(prob: EigenProblem, sh: _Shooter, E: float, m: int) -> tuple[Trajectory, int]:
    out = sh.outward(E, stop=m)
    inn = integrate_inward(prob.potential, prob.l, prob.mass, E, prob.grid, stop=m, f=prob.f(E))
    # join in log space: scale the inward piece to agree with the outward one at node m
    la_out, la_in = out.log_abs(), inn.log_abs()
    s_out, s_in = np.sign(out.values), np.sign(inn.values)
    shift = la_out[m] - la_in[0]
    sign = s_out[m] * s_in[0]
    logs = np.concatenate([la_out, la_in[1:] + shift])
    signs = np.concatenate([s_out, sign * s_in[1:]])
    finite = np.isfinite(logs)
    peak = np.max(logs[finite])
    u = np.where(finite, signs * np.exp(np.where(finite, logs - peak, 0.0)), 0.0)
    u, _ = normalize(prob.r, u)
    t = Trajectory(prob.grid, u, np.zeros_like(u), "matched", E)
    return t, out.rescale_events + inn.rescale_events


def solve(prob: EigenProblem, k: int, shooter: _Shooter | None = None) -> EigenResult:
    """Eigenstate with ``k`` nodes inside the problem's energy window."""
    if k < 0:
        raise ValueError("k must be non-negative")
    _refuse_if_needed(prob)
    if isinstance(prob.bc, RegularOnly) and _pure_inverse_square(prob.potential):
        raise NotFound(
            "pure inverse-square potential with the regular boundary condition is scale invariant: "
            "no length scale fixes a bound state")
    sh = shooter or _Shooter(prob)
    lo, hi = prob.window
    n_lo, n_hi = sh.nodes(lo), sh.nodes(hi)
    if not (n_lo <= k < n_hi):
        raise NotFound(f"no {k}-node state in window [{lo:.6g}, {hi:.6g}] (node counts {n_lo}..{n_hi})")

    a, b = lo, hi
    for _ in range(200):
        if sh.nodes(a) == k and sh.nodes(b) == k + 1:
            break
        mid = 0.5 * (a + b)
        if sh.nodes(mid) <= k:
            a = mid
        else:
            b = mid
    else:
        raise NotFound(f"node bisection for k={k} did not isolate a single level")

    # narrow until the defect brackets a root without a pole
    m = matching_index(prob, 0.5 * (a + b))
    da, db = sh.defect(a, m), sh.defect(b, m)
    for _ in range(200):
        if math.isfinite(da) and math.isfinite(db) and da > 0 > db:
            break
        if b - a <= 4 * np.finfo(float).eps * max(abs(a), abs(b)):
            break
        mid = 0.5 * (a + b)
        if sh.nodes(mid) <= k:
            a, da = mid, sh.defect(mid, m)
        else:
            b, db = mid, sh.defect(mid, m)
        m_new = matching_index(prob, 0.5 * (a + b))
        if m_new != m:
            m = m_new
            da, db = sh.defect(a, m), sh.defect(b, m)

    if math.isfinite(da) and math.isfinite(db) and da > 0 > db:
        xtol = 0.1 * prob.tol * max(abs(a), abs(b), 1e-300)
        E = brentq(lambda e: sh.defect(e, m), a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    else:
        E = 0.5 * (a + b)
    d = sh.defect(E, m)

    samples, events = _assemble(prob, sh, E, m)
    return EigenResult(
        energy=float(E),
        nodes=count_nodes(samples),
        samples=samples,
        norm=float(simpson(samples.values**2, x=prob.r)),
        match_defect=float(d),
        match_radius=float(prob.r[m]),
        rescale_events=events,
        bc_used=prob.bc,
        evaluations=sh.evaluations,
    )


@dataclass
class ScanResult:
    """Eigenstates for k = 0..k_max; unresolved indices are listed in ``status``."""

    states: list[EigenResult]
    status: dict[int, str]

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def energies(self) -> list[float]:
        return [s.energy for s in self.states]


def scan(prob: EigenProblem, k_max: int) -> ScanResult:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    _refuse_if_needed(prob)
    sh = _Shooter(prob)
    states, status = [], {}
    for k in range(k_max + 1):
        try:
            states.append(solve(prob, k, shooter=sh))
            status[k] = "ok"
        except NotFound as exc:
            status[k] = f"not-found: {exc}"
    return ScanResult(states, status)
