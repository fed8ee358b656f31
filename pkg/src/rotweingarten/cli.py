"""Command-line front end.

Subcommands: ``check-f``, ``trace``, ``classify``, ``mesh`` and ``sweep``.

Exit codes
  0  success
  1  usage or parse error
  2  the family is not elliptic
  3  existence gate failed (gate.json is written)
  4  I/O error
  5  integration or classification fault (step limit, inconsistent diagnostics)
"""
from __future__ import annotations

import argparse
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .ambient import Ambient
from .classifier import (ClassificationReport, InconsistentProfileError,
                         InsufficientEventsError, classify)
from .config import ConfigError, RunConfig, load_config, parse_config, parse_number
from .elliptic import check_ellipticity, compute_limits, parse_family
from .export import SWEEP_CSV_HEADER, fmt, mesh_obj, profile_csv, profile_json, to_json
from .integrator import (COMPLETED, GATE_FAILURE, GateFailure, Profile, ShootingSpec,
                         existence_gate, integrate_profile)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INADMISSIBLE = 2
EXIT_GATE = 3
EXIT_IO = 4
EXIT_FAULT = 5

GATE_FAIL = "GATE_FAIL"
STEP_FAIL = "INTEGRATION_FAIL"
INCONSISTENT = "INCONSISTENT"


class Inadmissible(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"f is not elliptic: sup 4x f'(x)^2 = {report.sup_value!r}")


@dataclass
class TraceResult:
    """Everything one trace produces.  Exactly one of ``report``/``failure`` is meaningful."""

    config: RunConfig
    profile: Optional[Profile] = None
    report: Optional[ClassificationReport] = None
    gate: Optional[dict] = None
    failure: Optional[str] = None
    message: str = ""

    @property
    def exit_code(self) -> int:
        if self.failure is None:
            return EXIT_OK
        return EXIT_GATE if self.failure == GATE_FAIL else EXIT_FAULT


def shooting_spec(cfg: RunConfig) -> ShootingSpec:
    return ShootingSpec(parse_family(cfg.family), Ambient(cfg.epsilon), cfg.phi0, cfg.sigma,
                        s_max=cfg.s_max, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)


def _gate_dict(spec: ShootingSpec, phi: float, sigma: int, s: float = 0.0) -> dict:
    gate = existence_gate(spec.F, spec.A, phi, sigma, compute_limits(spec.F))
    d = gate.to_dict()
    d.update({"phi": phi, "sigma": sigma, "s": s})
    return d


def run_trace(cfg: RunConfig) -> TraceResult:
    """Integrate and classify one configuration without touching the file system."""
    F = parse_family(cfg.family)
    er = check_ellipticity(F)
    if not er.admissible:
        raise Inadmissible(er)
    spec = shooting_spec(cfg)
    res = TraceResult(cfg)
    try:
        P = integrate_profile(spec, reintegrate_backward=cfg.diagnostic)
    except GateFailure as exc:
        res.gate = {"inequality": exc.inequality, "lhs": exc.lhs, "rhs": exc.rhs, "holds": False,
                    "phi": spec.phi0, "sigma": spec.sigma, "s": exc.s}
        res.failure, res.message = GATE_FAIL, str(exc)
        return res
    res.profile = P
    if P.termination.kind != COMPLETED:
        s_fail = P.termination.s
        if P.termination.kind == GATE_FAILURE:
            phi_fail = float(P.dense(s_fail)[0, 0])
            res.gate = _gate_dict(spec, phi_fail, spec.sigma, s_fail)
            res.gate["holds"] = False
            res.failure = GATE_FAIL
        else:
            res.failure = STEP_FAIL
        res.message = f"integration stopped with {P.termination.kind} at s={s_fail!r}"
        return res
    try:
        rep = classify(P)
    except (InconsistentProfileError, InsufficientEventsError) as exc:
        res.failure, res.message = INCONSISTENT, str(exc)
        return res
    res.report = rep
    phi_ref = rep.phi_min if rep.phi_min is not None else spec.phi0
    res.gate = _gate_dict(spec, phi_ref, spec.sigma)
    return res


def report_document(res: TraceResult) -> dict:
    doc = {"spec": res.profile.spec.to_dict() if res.profile is not None else shooting_spec(res.config).to_dict()}
    if res.report is not None:
        doc.update(res.report.to_dict())
    else:
        doc["kind"] = res.failure
        doc["message"] = res.message
    doc["gate_lhs"] = res.gate["lhs"] if res.gate else None
    doc["gate_rhs"] = res.gate["rhs"] if res.gate else None
    doc["gate"] = res.gate
    return doc


def _write(path: str, text: str) -> None:
    # newline="" keeps the bytes identical across platforms
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_trace(res: TraceResult, out_dir: str, mesh: bool = True) -> list:
    """Write the files of a trace; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def put(name, text):
        path = os.path.join(out_dir, name)
        _write(path, text)
        written.append(path)

    if res.profile is not None:
        put("profile.csv", profile_csv(res.profile))
        put("profile.json", profile_json(res.profile))
    if res.failure == GATE_FAIL:
        put("gate.json", to_json(res.gate))
    put("report.json", to_json(report_document(res)))
    if mesh and res.profile is not None and res.failure is None:
        put("surface.obj", mesh_obj(res.profile, res.config.mesh_theta_segments, res.config.poincare))
    return written


# --- sweep ---------------------------------------------------------------

def sweep_values(cfg: RunConfig) -> np.ndarray:
    if cfg.sweep_range is None:
        raise ConfigError("sweep needs sweep_range = start, end, count")
    start, end, count = cfg.sweep_range
    return np.linspace(start, end, int(count))


def _sweep_row(cfg: RunConfig) -> tuple:
    try:
        res = run_trace(cfg)
    except ValueError as exc:
        # e.g. phi0 outside the ambient domain
        return (cfg.phi0, "INVALID", None, None, None, None, None, None), {"message": str(exc)}
    gate = res.gate or {}
    if res.report is None:
        row = (cfg.phi0, res.failure, None, None, None, None, gate.get("lhs"), gate.get("rhs"))
    else:
        r = res.report
        row = (cfg.phi0, r.kind, r.period_T, r.vertical_period, r.t_infinity, r.decay_rate_b,
               gate.get("lhs"), gate.get("rhs"))
    return row, report_document(res)


def run_sweep(cfg: RunConfig, phi0_values: Optional[Sequence[float]] = None, jobs: int = 1) -> list:
    """One ``(row, report_document)`` pair per phi0, in input order."""
    values = list(sweep_values(cfg) if phi0_values is None else phi0_values)
    if not values:
        raise ConfigError("empty sweep")
    cfgs = [_replace_phi0(cfg, float(v)) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, cfgs))
    return [_sweep_row(c) for c in cfgs]


def _replace_phi0(cfg: RunConfig, phi0: float) -> RunConfig:
    return replace(cfg, phi0=phi0, sweep_range=None)


def sweep_csv(rows: list) -> str:
    out = io.StringIO()
    out.write(SWEEP_CSV_HEADER + "\n")
    for row, _ in rows:
        phi0, kind, *rest = row
        out.write(",".join([fmt(phi0), kind] + [fmt(v) for v in rest]) + "\n")
    return out.getvalue()


def row_succeeded(row) -> bool:
    return row[1] not in (GATE_FAIL, STEP_FAIL, INCONSISTENT, "INVALID")


# --- argument parsing ----------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file mirroring RunConfig")
    p.add_argument("--family", help="zero | rational:c=<c> | sqrtshift:a=<a>")
    p.add_argument("--epsilon", type=int, choices=(1, -1), help="+1 for S^2 x R, -1 for H^2 x R")
    p.add_argument("--phi0", help="seed radius; accepts pi/4 style values")
    p.add_argument("--sigma", type=int, choices=(1, -1), help="sign of t' at the seed")
    p.add_argument("--s-max", help="half-width of the integration window")
    p.add_argument("--tolerances", help="rel_tol,abs_tol")
    p.add_argument("--output-dir", help="defaults to $WG_OUTPUT_DIR or the working directory")
    p.add_argument("--mesh-theta-segments", type=int)
    p.add_argument("--poincare", action="store_true", default=None,
                   help="project the base by (x1, x2)/(1 + x3) in the mesh")
    p.add_argument("--diagnostic", action="store_true", default=None,
                   help="integrate the backward half instead of mirroring it")


def _config_from_args(args) -> RunConfig:
    overrides = {
        "family": args.family,
        "epsilon": args.epsilon,
        "phi0": None if args.phi0 is None else parse_number(args.phi0),
        "sigma": args.sigma,
        "s_max": None if args.s_max is None else parse_number(args.s_max),
        "output_dir": args.output_dir,
        "mesh_theta_segments": args.mesh_theta_segments,
        "poincare": args.poincare,
        "diagnostic": args.diagnostic,
    }
    if args.tolerances is not None:
        parts = [x for x in args.tolerances.replace(",", " ").split() if x]
        if len(parts) != 2:
            raise ConfigError("--tolerances expects rel_tol,abs_tol")
        overrides["tolerances"] = tuple(parse_number(x) for x in parts)
    if getattr(args, "sweep_range", None) is not None:
        parts = [x for x in args.sweep_range.replace(",", " ").split() if x]
        if len(parts) != 3:
            raise ConfigError("--sweep-range expects start,end,count")
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"sweep count must be an integer, got {parts[2]!r}") from None
        overrides["sweep_range"] = (parse_number(parts[0]), parse_number(parts[1]), count)
    if args.config:
        return load_config(args.config, **overrides)
    return parse_config("", **overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rotweingarten",
                     description="Rotational Weingarten surfaces of minimal type in S^2 x R and H^2 x R.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-f", help="ellipticity check of a family; JSON report on stdout")
    p.add_argument("family_spec")
    p.add_argument("--x-max", type=float, default=1e6)
    p.add_argument("--grid-size", type=int, default=4096)

    p = sub.add_parser("trace", help="integrate and classify; writes profile.csv, report.json, surface.obj")
    _add_run_options(p)
    p.add_argument("--no-mesh", action="store_true", help="skip surface.obj")

    p = sub.add_parser("classify", help="integrate and print the classification report")
    _add_run_options(p)

    p = sub.add_parser("mesh", help="integrate and write surface.obj")
    _add_run_options(p)

    p = sub.add_parser("sweep", help="trace over a phi0 grid; writes sweep.csv")
    _add_run_options(p)
    p.add_argument("--sweep-range", help="start,end,count")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


# --- commands ------------------------------------------------------------

def cmd_check_f(args) -> int:
    try:
        F = parse_family(args.family_spec)
    except ValueError as exc:
        print(f"rotweingarten: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = check_ellipticity(F, x_max=args.x_max, grid_size=args.grid_size)
    sys.stdout.write(to_json(rep.to_dict()))
    return EXIT_OK if rep.admissible else EXIT_INADMISSIBLE


def _traced(cfg: RunConfig) -> TraceResult:
    res = run_trace(cfg)
    if res.failure is not None:
        print(f"rotweingarten: {res.message}", file=sys.stderr)
    return res


def cmd_trace(cfg: RunConfig, args) -> int:
    res = _traced(cfg)
    write_trace(res, cfg.output_dir, mesh=not args.no_mesh)
    return res.exit_code


def cmd_classify(cfg: RunConfig, args) -> int:
    res = _traced(cfg)
    sys.stdout.write(to_json(report_document(res)))
    return res.exit_code


def cmd_mesh(cfg: RunConfig, args) -> int:
    res = _traced(cfg)
    if res.failure is not None:
        if res.failure == GATE_FAIL:
            os.makedirs(cfg.output_dir, exist_ok=True)
            _write(os.path.join(cfg.output_dir, "gate.json"), to_json(res.gate))
        return res.exit_code
    os.makedirs(cfg.output_dir, exist_ok=True)
    _write(os.path.join(cfg.output_dir, "surface.obj"),
           mesh_obj(res.profile, cfg.mesh_theta_segments, cfg.poincare))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    if cfg.sweep_range is None:
        raise ConfigError("sweep needs a sweep range (--sweep-range or sweep_range in the config)")
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    rows = run_sweep(cfg, jobs=args.jobs)
    row_dir = os.path.join(cfg.output_dir, "sweep")
    os.makedirs(row_dir, exist_ok=True)
    for i, (_, doc) in enumerate(rows):
        _write(os.path.join(row_dir, f"row_{i:04d}.json"), to_json(doc))
    _write(os.path.join(cfg.output_dir, "sweep.csv"), sweep_csv(rows))
    return EXIT_OK if any(row_succeeded(r) for r, _ in rows) else EXIT_FAULT


_COMMANDS = {"trace": cmd_trace, "classify": cmd_classify, "mesh": cmd_mesh, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help, --version and usage errors; return the code instead of exiting
        return int(exc.code or 0)
    if args.command == "check-f":
        return cmd_check_f(args)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[args.command](cfg, args)
    except Inadmissible as exc:
        sys.stdout.write(to_json(exc.report.to_dict()))
        print(f"rotweingarten: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (ConfigError, ValueError) as exc:
        print(f"rotweingarten: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rotweingarten: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
