"""Radial potential models and their behaviour at the origin.

Every model exposes ``__call__(r)`` (vectorised over numpy arrays) and an
exact small-r expansion of ``r**2 * V(r)`` used for classification and for
seeding series solutions near ``r = 0``.

Sign convention: ``lam = lim_{r->0} r**2 V(r)``.  An attractive inverse-square
well ``V = -V0 / r**2`` therefore has ``lam = -V0``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator


class DomainError(ValueError):
    """Potential evaluated at r <= 0."""


class UnsupportedExtrapolation(ValueError):
    """Tabulated potential queried below its first sample with no declared origin strength."""


def _as_radius(r):
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"potential is only defined for r > 0 (got min r = {np.min(arr)!r})")
    return arr


def _out(arr, r):
    return float(arr) if np.ndim(r) == 0 else arr


class Potential:
    """Base class.  Subclasses are frozen dataclasses."""

    def __call__(self, r):
        arr = _as_radius(r)
        return _out(self._eval(arr), r)

    def __add__(self, other: "Potential") -> "Sum":
        return Sum([self, other])

    def _eval(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def origin_series(self) -> dict[int, float] | None:
        """Exact coefficients ``{k: v_k}`` with ``r**2 V(r) = sum_k v_k r**k`` near 0.

        Only integer powers that are known exactly are listed; ``None`` means
        the potential is more singular than ``1/r**2`` (or has no limit).
        """
        raise NotImplementedError

    def asymptotic_value(self) -> float:
        """``lim_{r->inf} V(r)``; ``inf`` for confining potentials."""
        raise NotImplementedError

    def series_radius(self) -> float:
        """Radius below which ``origin_series`` describes V exactly."""
        return math.inf

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Coulomb(Potential):
    alpha: float

    def _eval(self, r):
        return -self.alpha / r

    def origin_series(self):
        return {1: -self.alpha}

    def asymptotic_value(self):
        return 0.0

    def to_spec(self):
        return {"model": "coulomb", "alpha": self.alpha}


@dataclass(frozen=True)
class InverseSquare(Potential):
    """``V(r) = -V0 / r**2``; ``V0 > 0`` is attractive."""

    V0: float

    def _eval(self, r):
        return -self.V0 / r**2

    def origin_series(self):
        return {0: -self.V0}

    def asymptotic_value(self):
        return 0.0

    def to_spec(self):
        return {"model": "inverse_square", "V0": self.V0}


@dataclass(frozen=True)
class Harmonic(Potential):
    omega: float
    mass: float = 1.0

    def _eval(self, r):
        return 0.5 * self.mass * self.omega**2 * r**2

    def origin_series(self):
        return {4: 0.5 * self.mass * self.omega**2}

    def asymptotic_value(self):
        return math.inf

    def to_spec(self):
        return {"model": "harmonic", "omega": self.omega, "mass": self.mass}


@dataclass(frozen=True)
class FiniteWell(Potential):
    """Spherical square well of the given depth (> 0 means attractive)."""

    depth: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("well radius must be positive")

    def _eval(self, r):
        return np.where(r < self.radius, -self.depth, 0.0)

    def origin_series(self):
        return {2: -self.depth}

    def asymptotic_value(self):
        return 0.0

    def series_radius(self):
        return self.radius

    def to_spec(self):
        return {"model": "well", "depth": self.depth, "radius": self.radius}


@dataclass(frozen=True)
class PowerLaw(Potential):
    """``V(r) = g * r**(-n)``.  Used mainly to represent potentials that are
    more singular than ``1/r**2`` (``n > 2``)."""

    g: float
    n: float

    def _eval(self, r):
        return self.g * r ** (-self.n)

    def origin_series(self):
        if self.g == 0:
            return {}
        if self.n > 2:
            return None
        k = 2 - self.n
        if float(k).is_integer():
            return {int(k): self.g}
        # non-integer power: lam is still exact (zero), corrections are not listed
        return {}

    def asymptotic_value(self):
        if self.n > 0:
            return 0.0
        if self.n == 0:
            return self.g
        return math.copysign(math.inf, self.g)

    def to_spec(self):
        return {"model": "power", "g": self.g, "n": self.n}


@dataclass(frozen=True)
class Sum(Potential):
    parts: Sequence[Potential]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("sum of zero potentials")

    def _eval(self, r):
        return sum(p._eval(r) for p in self.parts)

    def origin_series(self):
        total: dict[int, float] = {}
        for p in self.parts:
            s = p.origin_series()
            if s is None:
                return None
            for k, v in s.items():
                total[k] = total.get(k, 0.0) + v
        return total

    def asymptotic_value(self):
        return sum(p.asymptotic_value() for p in self.parts)

    def series_radius(self):
        return min(p.series_radius() for p in self.parts)

    def to_spec(self):
        return {"model": "sum", "parts": [p.to_spec() for p in self.parts]}


@dataclass(frozen=True, eq=False)
class Tabulated(Potential):
    """Sampled potential with monotone-cubic interpolation.

    Below the first sample the potential continues as ``lam/r**2 + c`` with
    ``c`` fixed by continuity, so ``lam`` has to be declared.  Above the last
    sample it is held constant.
    """

    r: np.ndarray
    V: np.ndarray
    lam: float | None = None
    source: str | None = None
    _interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        V = np.asarray(self.V, dtype=float)
        if r.ndim != 1 or r.shape != V.shape or r.size < 2:
            raise ValueError("tabulated potential needs matching 1-d r and V arrays (>= 2 samples)")
        if not np.all(r > 0):
            raise ValueError("tabulated radii must be positive")
        if not np.all(np.diff(r) > 0):
            raise ValueError("tabulated radii must be strictly increasing")
        if not np.all(np.isfinite(V)):
            raise ValueError("tabulated potential values must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "_interp", PchipInterpolator(r, V, extrapolate=False))

    @classmethod
    def from_csv(cls, path: str | Path, lam: float | None = None) -> "Tabulated":
        rows = []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or {"r", "V"} - set(reader.fieldnames):
                raise ValueError(f"{path}: expected CSV columns r,V")
            for row in reader:
                rows.append((float(row["r"]), float(row["V"])))
        r, V = zip(*rows) if rows else ((), ())
        return cls(np.array(r), np.array(V), lam=lam, source=str(path))

    @property
    def _inner_constant(self) -> float:
        return self.V[0] - self.lam / self.r[0] ** 2

    def _eval(self, r):
        out = np.empty_like(r)
        lo = r < self.r[0]
        hi = r > self.r[-1]
        mid = ~(lo | hi)
        if np.any(lo):
            if self.lam is None:
                raise UnsupportedExtrapolation(
                    f"r = {np.min(r[lo])} lies below the first sample {self.r[0]} "
                    "and no origin strength lam was declared"
                )
            out[lo] = self.lam / r[lo] ** 2 + self._inner_constant
        out[hi] = self.V[-1]
        out[mid] = self._interp(r[mid])
        return out

    def origin_series(self):
        if self.lam is None:
            return None
        return {0: self.lam, 2: self._inner_constant}

    def asymptotic_value(self):
        return float(self.V[-1])

    def series_radius(self):
        return float(self.r[0])

    def to_spec(self):
        spec = {"model": "tabulated", "lambda": self.lam}
        if self.source is not None:
            spec["file"] = self.source
        else:
            spec["r"] = self.r.tolist()
            spec["V"] = self.V.tolist()
        return spec


def evaluate(p: Potential, r):
    """V(r) for r > 0 (scalar or array)."""
    return p(r)


class OriginKind(str, enum.Enum):
    REGULAR = "Regular"
    INVERSE_SQUARE = "InverseSquareSingular"
    UNSUPPORTED = "Unsupported"


@dataclass(frozen=True)
class OriginClassification:
    kind: OriginKind
    lam: float | None

    @property
    def attractive(self) -> bool:
        return self.lam is not None and self.lam < 0

    @property
    def V0(self) -> float | None:
        return None if self.lam is None else -self.lam

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "lambda": self.lam,
            "V0": self.V0,
            "attractive": self.attractive,
        }


def classify_origin(p: Potential) -> OriginClassification:
    """Exact origin class from the model structure, never from sampled values."""
    series = p.origin_series()
    if series is None or any(k < 0 for k in series):
        return OriginClassification(OriginKind.UNSUPPORTED, None)
    lam = float(series.get(0, 0.0))
    if lam == 0.0:
        return OriginClassification(OriginKind.REGULAR, 0.0)
    return OriginClassification(OriginKind.INVERSE_SQUARE, lam)


def effective_potential(p: Potential, l: int, mass: float, r):
    """``l(l+1)/(2 m r**2) + V(r)``."""
    arr = _as_radius(r)
    return _out(l * (l + 1) / (2.0 * mass * arr**2) + p._eval(arr), r)


def from_spec(spec: dict, base_dir: str | Path | None = None) -> Potential:
    """Build a potential from the config grammar, e.g. ``{"model": "coulomb", "alpha": 1.0}``."""
    if not isinstance(spec, dict) or "model" not in spec:
        raise ValueError(f"potential spec must be a mapping with a 'model' key: {spec!r}")
    spec = dict(spec)
    model = spec.pop("model")

    def take(allowed: set[str], required: set[str]):
        unknown = set(spec) - allowed
        if unknown:
            raise ValueError(f"unknown keys for model {model!r}: {sorted(unknown)}")
        missing = required - set(spec)
        if missing:
            raise ValueError(f"missing keys for model {model!r}: {sorted(missing)}")
        return spec

    if model == "coulomb":
        return Coulomb(float(take({"alpha"}, {"alpha"})["alpha"]))
    if model == "inverse_square":
        return InverseSquare(float(take({"V0"}, {"V0"})["V0"]))
    if model == "harmonic":
        d = take({"omega", "mass"}, {"omega"})
        return Harmonic(float(d["omega"]), float(d.get("mass", 1.0)))
    if model == "well":
        d = take({"depth", "radius"}, {"depth", "radius"})
        return FiniteWell(float(d["depth"]), float(d["radius"]))
    if model == "power":
        d = take({"g", "n"}, {"g", "n"})
        return PowerLaw(float(d["g"]), float(d["n"]))
    if model == "sum":
        d = take({"parts"}, {"parts"})
        return Sum([from_spec(part, base_dir) for part in d["parts"]])
    if model == "tabulated":
        d = take({"file", "lambda", "r", "V"}, set())
        lam = d.get("lambda")
        lam = None if lam is None else float(lam)
        if "file" in d:
            path = Path(d["file"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            tab = Tabulated.from_csv(path, lam=lam)
            return Tabulated(tab.r, tab.V, lam=lam, source=str(d["file"]))
        if "r" in d and "V" in d:
            return Tabulated(np.asarray(d["r"]), np.asarray(d["V"]), lam=lam)
        raise ValueError("tabulated potential needs 'file' or inline 'r' and 'V'")
    raise ValueError(f"unknown potential model {model!r}")
