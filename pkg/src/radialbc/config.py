"""Run configuration: TOML in, validated dataclass out, same schema echoed into reports."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import potentials as pot
from .engine import Mixed, RegularOnly, build_grid
from .spectrum import DEFAULT_GRID, EigenProblem

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class GridSpec:
    rmin: float = DEFAULT_GRID[0]
    rmax: float = DEFAULT_GRID[1]
    npoints: int = DEFAULT_GRID[2]


@dataclass
class BCSpec:
    kind: str = "regular"
    g: float = 0.0
    r_ref: float = 1.0


@dataclass
class SolveSpec:
    k: int = 0
    energy_window: list[float] | None = None


@dataclass
class ScanSpec:
    k_max: int = 2


@dataclass
class DeltaCheckSpec:
    a_values: list[float] = field(default_factory=lambda: [1e-1, 1e-2, 1e-3, 1e-4])
    probe_radii: list[float] = field(default_factory=lambda: [1e-8, 1e-4, 1e-2, 1.0, 10.0])
    R: float = 1.0


@dataclass
class FluxSpec:
    s: float = 0.5
    ucoeffs: list[str] = field(default_factory=lambda: ["1", "1j"])
    a0: float = 0.1
    levels: int = 7


@dataclass
class OutputSpec:
    wavefunction_csv: str | None = None


@dataclass
class RunConfig:
    potential: dict = field(default_factory=lambda: {"model": "coulomb", "alpha": 1.0})
    l: int = 0
    mass: float = 1.0
    tol: float = 1e-10
    grid: GridSpec = field(default_factory=GridSpec)
    bc: BCSpec = field(default_factory=BCSpec)
    solve: SolveSpec = field(default_factory=SolveSpec)
    scan: ScanSpec = field(default_factory=ScanSpec)
    delta_check: DeltaCheckSpec = field(default_factory=DeltaCheckSpec)
    flux: FluxSpec = field(default_factory=FluxSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    base_dir: str | None = field(default=None, repr=False)

    # -- construction -----------------------------------------------------

    def build_potential(self) -> pot.Potential:
        return pot.from_spec(self.potential, self.base_dir)

    def build_bc(self):
        if self.bc.kind == "regular":
            return RegularOnly()
        return Mixed(self.bc.g, self.bc.r_ref)

    def build_problem(self) -> EigenProblem:
        window = None if self.solve.energy_window is None else tuple(self.solve.energy_window)
        return EigenProblem(
            potential=self.build_potential(),
            l=self.l,
            mass=self.mass,
            bc=self.build_bc(),
            grid=build_grid(self.grid.rmin, self.grid.rmax, self.grid.npoints),
            energy_window=window,
            tol=self.tol,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("base_dir")
        return {"schema_version": SCHEMA_VERSION, **d}


_SECTIONS = {"grid": GridSpec, "bc": BCSpec, "solve": SolveSpec, "scan": ScanSpec,
             "delta_check": DeltaCheckSpec, "flux": FluxSpec, "output": OutputSpec}
_SCALARS = {"l": int, "mass": float, "tol": float}


def _section(cls, data, name):
    if not isinstance(data, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    return cls(**data)


def from_dict(data: dict, base_dir: str | Path | None = None) -> RunConfig:
    data = dict(data)
    version = data.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version} (expected {SCHEMA_VERSION})")
    unknown = set(data) - set(_SECTIONS) - set(_SCALARS) - {"potential"}
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    cfg = RunConfig(base_dir=None if base_dir is None else str(base_dir))
    try:
        for key, conv in _SCALARS.items():
            if key in data:
                setattr(cfg, key, conv(data[key]))
        if "potential" in data:
            cfg.potential = dict(data["potential"])
        for key, cls in _SECTIONS.items():
            if key in data:
                setattr(cfg, key, _section(cls, data[key], key))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if cfg.bc.kind not in ("regular", "mixed"):
        raise ConfigError(f"bc.kind must be 'regular' or 'mixed', got {cfg.bc.kind!r}")
    if cfg.l < 0:
        raise ConfigError("l must be non-negative")
    if not cfg.mass > 0:
        raise ConfigError("mass must be positive")
    if cfg.solve.energy_window is not None and len(cfg.solve.energy_window) != 2:
        raise ConfigError("solve.energy_window must be [E_lo, E_hi]")
    try:
        prob = cfg.build_problem()
        if cfg.solve.energy_window is not None:
            prob.window
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc


def load(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return from_dict(data, base_dir=path.parent)
