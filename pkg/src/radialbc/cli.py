"""Command-line entry point: ``radialbc <command> [options]``.

Exit codes: 0 ok, 1 configuration error, 2 no eigenvalue found, 3 refused regime,
4 a ``reproduce`` experiment ran but FAILED its threshold.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import claims, diagnostics as dg
from .config import ConfigError, RunConfig, from_dict, load, validate
from .frobenius import RefusedRegime, admissibility, indicial
from .potentials import classify_origin
from .spectrum import NotFound, scan, solve

EXIT_OK, EXIT_CONFIG, EXIT_NOT_FOUND, EXIT_REFUSED, EXIT_FAIL = 0, 1, 2, 3, 4


def _clean(obj):
    """JSON-safe copy: non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return _clean(obj.item())
    return obj


def render_json(command: str, cfg: RunConfig, result) -> str:
    report = {"schema_version": cfg.to_dict()["schema_version"], "command": command,
              "config": cfg.to_dict(), "result": result}
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


def render_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _window(text: str) -> list[float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected E_LO,E_HI, got {text!r}") from None
    return [lo, hi]


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--config", help="TOML run configuration")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")
    g.add_argument("--potential", help='potential spec as JSON, e.g. \'{"model":"coulomb","alpha":1.0}\'')
    g.add_argument("--rmin", type=float, help="first grid radius (default 1e-6)")
    g.add_argument("--rmax", type=float, help="last grid radius (default 50)")
    g.add_argument("--npoints", type=int, help="number of grid points (default 20001)")
    g.add_argument("--mass", type=float, help="particle mass (default 1)")
    g.add_argument("--l", type=int, help="angular momentum (default 0)")
    g.add_argument("--tol", type=float, help="relative energy tolerance (default 1e-10)")
    g.add_argument("--bc", choices=("regular", "mixed"), help="origin condition (default regular)")
    g.add_argument("--g", type=float, help="mixed-condition admixture g (default 0)")
    g.add_argument("--r-ref", type=float, dest="r_ref", help="mixed-condition reference radius (default 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="radialbc", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common], help="origin class, indicial exponents and admissibility")

    p = sub.add_parser("solve", parents=[common], help="one bound state by node count")
    p.add_argument("--k", type=int, help="number of nodes (default 0)")
    p.add_argument("--window", type=_window, metavar="E_LO,E_HI",
                   help="energy window, e.g. --window=-10,-1e-8")
    p.add_argument("--wavefunction", help="also dump r,u to this CSV file")

    p = sub.add_parser("scan", parents=[common], help="bound states with 0..k_max nodes")
    p.add_argument("--kmax", type=int, help="highest node count (default 2)")
    p.add_argument("--window", type=_window, metavar="E_LO,E_HI",
                   help="energy window, e.g. --window=-10,-1e-8")
    p.add_argument("--wavefunction", help="also dump r,u_0,u_1,... to this CSV file")

    p = sub.add_parser("delta-check", parents=[common], help="regularised delta identities")
    p.add_argument("--a", type=float, nargs="+", dest="a_values",
                   help="regularisation scales (default 1e-1 1e-2 1e-3 1e-4)")
    p.add_argument("--radii", type=float, nargs="+", help="probe radii for the Laplacian identity")
    p.add_argument("--R", type=float, help="inner sphere radius (default 1)")

    p = sub.add_parser("flux", parents=[common], help="flux through a vanishing sphere for psi = u~/r**s")
    p.add_argument("--s", type=float, help="divergence exponent s (default 0.5)")
    p.add_argument("--ucoeffs", help="comma-separated power-series coefficients of u~, e.g. '1,1j'")

    p = sub.add_parser("reproduce", parents=[common], help="run a canned experiment and print PASS/FAIL")
    p.add_argument("claim", choices=sorted(claims.CLAIMS))
    return parser


def config_from_args(args) -> RunConfig:
    cfg = load(args.config) if args.config else from_dict({})
    try:
        if args.potential:
            cfg.potential = json.loads(args.potential)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--potential is not valid JSON: {exc}") from exc
    for name in ("l", "mass", "tol"):
        if getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    for flag, attr in (("rmin", "rmin"), ("rmax", "rmax"), ("npoints", "npoints")):
        if getattr(args, flag) is not None:
            setattr(cfg.grid, attr, getattr(args, flag))
    if args.bc is not None:
        cfg.bc.kind = args.bc
    if args.g is not None:
        cfg.bc.g = args.g
    if args.r_ref is not None:
        cfg.bc.r_ref = args.r_ref
    extra = vars(args)
    if extra.get("k") is not None:
        cfg.solve.k = extra["k"]
    if extra.get("window") is not None:
        cfg.solve.energy_window = list(extra["window"])
    if extra.get("kmax") is not None:
        cfg.scan.k_max = extra["kmax"]
    if extra.get("wavefunction") is not None:
        cfg.output.wavefunction_csv = extra["wavefunction"]
    if extra.get("a_values") is not None:
        cfg.delta_check.a_values = extra["a_values"]
    if extra.get("radii") is not None:
        cfg.delta_check.probe_radii = extra["radii"]
    if extra.get("R") is not None:
        cfg.delta_check.R = extra["R"]
    if extra.get("s") is not None:
        cfg.flux.s = extra["s"]
    if extra.get("ucoeffs") is not None:
        cfg.flux.ucoeffs = [c.strip() for c in extra["ucoeffs"].split(",")]
    validate(cfg)
    return cfg


# -- commands ---------------------------------------------------------------


def cmd_classify(cfg: RunConfig, fmt: str) -> str:
    cls = classify_origin(cfg.build_potential())
    result = {"origin": cls.to_dict()}
    if cls.kind.value != "Unsupported":
        ix = indicial(cfg.l, cfg.mass, cls)
        result["indicial"] = ix.to_dict()
        if ix.regime.value != "FallToCenter":
            result["admissibility"] = admissibility(ix).to_dict()
    if fmt == "csv":
        rows = []
        for section, data in result.items():
            for k, v in data.items():
                if isinstance(v, dict):
                    rows.extend((f"{section}.{k}.{kk}", vv) for kk, vv in v.items())
                else:
                    rows.append((f"{section}.{k}", v))
        return render_csv(["key", "value"], rows)
    return render_json("classify", cfg, result)


def _dump_wavefunctions(path: str, states) -> None:
    if not states:
        return
    header = ["r"] + [f"u{s.nodes}" for s in states]
    rows = zip(states[0].r.tolist(), *[s.u.tolist() for s in states])
    with open(path, "w") as fh:
        fh.write(render_csv(header, rows))


def cmd_solve(cfg: RunConfig, fmt: str) -> str:
    prob = cfg.build_problem()
    res = solve(prob, cfg.solve.k)
    if cfg.output.wavefunction_csv:
        _dump_wavefunctions(cfg.output.wavefunction_csv, [res])
    if fmt == "csv":
        return render_csv(["r", "u"], zip(res.r.tolist(), res.u.tolist()))
    return render_json("solve", cfg, {**res.to_dict(), "grid": prob.grid.to_dict(),
                                      "energy_window": list(prob.window)})


def cmd_scan(cfg: RunConfig, fmt: str) -> tuple[str, bool]:
    prob = cfg.build_problem()
    res = scan(prob, cfg.scan.k_max)
    if cfg.output.wavefunction_csv:
        _dump_wavefunctions(cfg.output.wavefunction_csv, res.states)
    if fmt == "csv":
        text = render_csv(["k", "energy", "nodes", "match_defect"],
                          [(s.nodes, s.energy, s.nodes, s.match_defect) for s in res.states])
    else:
        text = render_json("scan", cfg, {"states": [s.to_dict() for s in res.states],
                                         "status": {str(k): v for k, v in res.status.items()},
                                         "grid": prob.grid.to_dict(), "energy_window": list(prob.window)})
    return text, bool(res.states)


def cmd_delta_check(cfg: RunConfig, fmt: str) -> str:
    d = cfg.delta_check
    rep = dg.delta_probe(d.a_values, d.probe_radii, d.R)
    if fmt == "csv":
        rows = zip(rep.a_values, rep.laplacian_identity_error, rep.unit_integral, rep.exterior_fraction)
        return render_csv(["a", "laplacian_identity_error", "unit_integral", "exterior_fraction"], rows)
    return render_json("delta-check", cfg, rep.to_dict())


def cmd_flux(cfg: RunConfig, fmt: str) -> str:
    try:
        coeffs = [complex(c) for c in cfg.flux.ucoeffs]
        probe = dg.FluxProbe(cfg.flux.s, coeffs, a0=cfg.flux.a0, levels=cfg.flux.levels)
    except ValueError as exc:
        raise ConfigError(f"bad flux probe: {exc}") from exc
    res = dg.flux_limit(probe)
    if fmt == "csv":
        ncol = len(res.richardson)
        # Richardson columns act on the amplitude surface_term / a**leading_power
        header = ["a", "surface_term"] + [f"amplitude_richardson_{j}" for j in range(ncol)]
        rows = [row + [""] * (len(header) - len(row)) for row in res.table_rows()]
        out = f"# s={res.s!r} classification={res.classification} limit={res.limit!r}\n"
        return out + render_csv(header, rows)
    return render_json("flux", cfg, res.to_dict())


def cmd_reproduce(cfg: RunConfig, claim: str, fmt: str) -> tuple[str, claims.ClaimResult]:
    res = claims.reproduce(claim)
    verdict = "PASS" if res.passed else "FAIL"
    if fmt == "csv":
        return render_csv(["claim", "verdict"], [(claim, verdict)]), res
    return render_json("reproduce", cfg, {**res.to_dict(), "verdict": verdict}), res


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = config_from_args(args)
        if args.command == "classify":
            _emit(cmd_classify(cfg, args.format), args.out)
        elif args.command == "solve":
            _emit(cmd_solve(cfg, args.format), args.out)
        elif args.command == "scan":
            text, found = cmd_scan(cfg, args.format)
            _emit(text, args.out)
            if not found:
                return EXIT_NOT_FOUND
        elif args.command == "delta-check":
            _emit(cmd_delta_check(cfg, args.format), args.out)
        elif args.command == "flux":
            _emit(cmd_flux(cfg, args.format), args.out)
        elif args.command == "reproduce":
            text, res = cmd_reproduce(cfg, args.claim, args.format)
            _emit(text, args.out)
            for line in res.lines:
                print(line, file=sys.stderr)
            print(f"{args.claim}: {'PASS' if res.passed else 'FAIL'}", file=sys.stderr)
            return EXIT_OK if res.passed else EXIT_FAIL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except RefusedRegime as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
