"""Command-line front end.

Machine-readable output is JSON with sorted keys and floats written as their
shortest round-trip repr, so reruns produce identical bytes.  Exit codes: 0 on
success, 1 when a verification check fails, 2 on invalid input, 3 when a
solver does not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classify, geometry, periods
from .curve import degree, genus
from .families import build_family, even_c
from .integrator import verify_periods

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2, 3

DEFAULT_TOL_PERIOD = 1e-8
DEFAULT_TOL_SYMMETRY = 1e-6
DEFAULT_TOL_QUAD = 1e-13
DEFAULT_MESH_RES = (48, 64)


class ValidationError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    gamma: int | None = None
    k: int | None = None
    tol_period: float = DEFAULT_TOL_PERIOD
    tol_symmetry: float = DEFAULT_TOL_SYMMETRY
    tol_quad: float = DEFAULT_TOL_QUAD
    mesh_res: tuple = DEFAULT_MESH_RES
    umax: float = 4.0
    out: str | None = None
    params: str | None = None
    seed: int = 0
    samples: int = 1000
    force: bool = False
    case: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("tol_period", "tol_symmetry", "tol_quad", "umax"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if len(self.mesh_res) != 2 or min(self.mesh_res) < 2:
            raise ValidationError("mesh resolution must be at least 2x2")
        if self.samples < 1:
            raise ValidationError("samples must be positive")


# --------------------------------------------------------------------------
# output helpers


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return x  # shortest round-trip repr
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _emit(obj, out):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    return text


def _error(kind: str, message: str, code: int, **extra) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message, "exit_code": code, **extra}))
    return code


# --------------------------------------------------------------------------
# config


def _parse_res(text) -> tuple:
    if isinstance(text, (tuple, list)):
        return tuple(int(x) for x in text)
    s = str(text).lower().replace(",", "x")
    parts = [int(p) for p in s.split("x") if p]
    if len(parts) == 1:
        parts = parts * 2
    return tuple(parts)


def config_from_args(args, env=None) -> RunConfig:
    """Flags take precedence over ``MSFORGE_*`` variables, which beat defaults."""
    env = os.environ if env is None else env
    tol = args.tol_period if getattr(args, "tol_period", None) is not None else \
        float(env.get("MSFORGE_TOL_PERIOD", DEFAULT_TOL_PERIOD))
    res = getattr(args, "mesh_res", None)
    if res is None:
        res = env.get("MSFORGE_MESH_RES", DEFAULT_MESH_RES)
    try:
        mesh_res = _parse_res(res)
    except ValueError as exc:
        raise ValidationError(f"bad mesh resolution {res!r}") from exc
    return RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        gamma=getattr(args, "gamma", None),
        k=getattr(args, "k", None),
        tol_period=tol,
        tol_symmetry=getattr(args, "tol_symmetry", DEFAULT_TOL_SYMMETRY),
        mesh_res=mesh_res,
        umax=getattr(args, "umax", 4.0),
        out=getattr(args, "out", None),
        params=getattr(args, "params", None),
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", 1000),
        force=getattr(args, "force", False),
        case=getattr(args, "case", None),
    )


def _load_params(cfg: RunConfig) -> periods.FamilySpec:
    if cfg.params is None:
        if cfg.family == "catenoid":
            return periods.FamilySpec("catenoid")
        raise ValidationError("a params file is required (or --family catenoid)")
    path = Path(cfg.params)
    if not path.exists():
        raise ValidationError(f"params file {str(path)!r} does not exist")
    try:
        spec = periods.load_spec(path)
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise ValidationError(f"corrupt params file: {exc}") from exc
    if spec.family not in ("genus", "even", "weber", "catenoid"):
        raise ValidationError(f"unknown family {spec.family!r}")
    if spec.family in ("genus", "weber") and spec.c is None:
        raise ValidationError("params file lacks c")
    if spec.family == "even" and spec.a is None:
        raise ValidationError("params file lacks a")
    return spec


# --------------------------------------------------------------------------
# commands


def cmd_solve(cfg: RunConfig) -> tuple:
    fam = cfg.family
    if fam == "genus":
        if cfg.gamma is None or cfg.gamma < 1:
            raise ValidationError("genus family needs --gamma >= 1")
        c = periods.solve_c(cfg.gamma)
        fam_ = build_family("genus", gamma=cfg.gamma, c=c)
        report = verify_periods(fam_.data, fam_.generators, cfg.tol_period)
        spec = periods.FamilySpec("genus", gamma=cfg.gamma, c=c, residual=report.max_cycle_residual)
    elif fam == "even":
        if cfg.k is None or cfg.k < 2 or cfg.k % 2:
            raise ValidationError("even family needs an even --k >= 2")
        a = periods.solve_a(cfg.k)
        spec = periods.FamilySpec("even", k=cfg.k, a=a, c=even_c(cfg.k, a),
                                  residual=abs(periods.even_family_defect(cfg.k, a)))
    elif fam == "weber":
        spec = _solve_weber(cfg)
    elif fam == "catenoid":
        spec = periods.FamilySpec("catenoid", residual=0.0)
    else:
        raise ValidationError(f"unknown family {fam!r}")
    if spec.residual is not None and not spec.residual < cfg.tol_period:
        raise periods.ConvergenceError(f"residual {spec.residual:.3e} above {cfg.tol_period:g}",
                                       spec.to_json())
    payload = spec.to_json()
    _emit(payload, cfg.out)
    keys = [f"{k}={payload[k]}" for k in ("gamma", "k", "c", "a", "residual") if k in payload]
    return payload, f"solved {fam}: " + " ".join(keys)


def _solve_weber(cfg: RunConfig) -> periods.FamilySpec:
    if cfg.gamma is None or cfg.gamma < 1:
        raise ValidationError("weber family needs --gamma >= 1")
    res = periods.weber_solve(cfg.gamma, tol=cfg.tol_period)
    if not res["converged"]:
        raise periods.ConvergenceError(
            f"weber system for gamma={cfg.gamma} did not converge (residual {res['residual']:.3e})", res)
    return periods.FamilySpec("weber", gamma=cfg.gamma, c=res["c"], roots=res["roots"],
                              residual=res["residual"])


def _family_of(spec: periods.FamilySpec):
    return build_family(spec.family, **spec.family_params())


def cmd_verify(cfg: RunConfig) -> tuple:
    spec = _load_params(cfg)
    fam = _family_of(spec)
    data = fam.data
    t0 = time.perf_counter()
    report = verify_periods(data, fam.generators, cfg.tol_period)
    checks = {"periods": {"passed": report.passed, "max_cycle_residual": report.max_cycle_residual,
                          "max_residue_imag": report.max_residue_imag}}
    ends = geometry.end_orders(data)
    deg_g = degree(data.g, data.curve)
    gam = genus(data.curve)
    jm = geometry.jorge_meeks_check(gam, ends, deg_g)
    checks["ends"] = {"d": list(ends.d), "kinds": [e.kind for e in ends.ends],
                      "deg_g": deg_g, "genus": gam,
                      "jorge_meeks": {"lhs": jm.lhs, "rhs": jm.rhs, "bound": jm.bound},
                      "passed": jm.equality and jm.degree_bound_holds}
    tc = geometry.total_curvature(data)
    checks["total_curvature"] = {"value": tc.extrapolated, "expected": tc.expected,
                                 "relative_error": tc.relative_error,
                                 "passed": tc.relative_error < 0.01}
    if fam.symmetries:
        fld = geometry.SurfaceField(data, fam.basepoint, geometry.GridSpec(*cfg.mesh_res, cfg.umax))
        elems = geometry.group_elements(fam.symmetries)
        devs = {}
        for op in elems:
            r = geometry.symmetry_check(fld, op, cfg.samples, cfg.seed)
            devs[op.name] = r["deviation"]
        worst = max(devs.values())
        checks["symmetry"] = {"order": len(elems), "max_deviation": worst, "deviations": devs,
                              "passed": worst < cfg.tol_symmetry}
    passed = all(c["passed"] for c in checks.values())
    payload = {"family": spec.family, "params": spec.to_json(), "checks": checks, "passed": passed}
    _emit(payload, cfg.out)
    lines = [f"{name}: {'pass' if c['passed'] else 'FAIL'}" for name, c in checks.items()]
    lines.append(f"verify {spec.family}: {'all pass' if passed else 'FAILED'} "
                 f"({time.perf_counter() - t0:.1f} s)")
    return payload, "\n".join(lines)


def cmd_mesh(cfg: RunConfig) -> tuple:
    spec = _load_params(cfg)
    fam = _family_of(spec)
    report = verify_periods(fam.data, fam.generators, cfg.tol_period)
    grid = geometry.GridSpec(*cfg.mesh_res, cfg.umax)
    mesh = geometry.build_mesh(fam.data, fam.basepoint, grid, report, cfg.force)
    out = Path(cfg.out or f"{spec.family}.obj")
    if out.suffix == ".ply":
        geometry.export_ply(mesh, out)
    else:
        geometry.export_obj(mesh, out)
    meta = {"family": spec.family, "params": spec.to_json(), "vertices": len(mesh.vertices),
            "faces": len(mesh.faces), "period_residual": report.max_cycle_residual,
            "residue_imag": report.max_residue_imag, "periods_passed": report.passed,
            "forced": cfg.force, "grid": {"nu": grid.nu, "ntheta": grid.ntheta, "umax": grid.umax}}
    sidecar = out.with_name(out.stem + ".sidecar.json")
    sidecar.write_text(dumps(meta))
    return meta, f"wrote {out} ({len(mesh.vertices)} vertices, {len(mesh.faces)} faces) and {sidecar}"


def cmd_classify(cfg: RunConfig) -> tuple:
    if cfg.gamma is None or cfg.gamma < 1:
        raise ValidationError("classify needs --gamma >= 1")
    payload = {"gamma": cfg.gamma,
               "R": [c.to_json() for c in classify.enumerate_R_cases(cfg.gamma)],
               "Delta0-swap": [c.to_json() for c in classify.enumerate_Delta0_cases(cfg.gamma, True)],
               "Delta0-fixed": [c.to_json() for c in classify.enumerate_Delta0_cases(cfg.gamma, False)]}
    _emit(payload, cfg.out)
    return payload, classify.format_table(cfg.gamma)


def cmd_nonexist(cfg: RunConfig) -> tuple:
    if cfg.case not in periods.NONEXIST_CASES:
        raise ValidationError(f"unknown case {cfg.case!r}; expected one of {periods.NONEXIST_CASES}")
    rep = periods.nonexistence_report(cfg.case)
    _emit(rep, cfg.out)
    line = f"{cfg.case}: {rep['samples']} samples, obstruction {'confirmed' if rep['obstructed'] else 'NOT confirmed'}"
    if "claim_overlap" in rep:
        lo, hi = rep["claim_overlap"]
        line += f"; claims overlap on [{lo:g}, {hi:.6g}], coverage {'complete' if rep['coverage'] else 'incomplete'}"
    return rep, line


def cmd_weber(cfg: RunConfig) -> tuple:
    spec = _solve_weber(cfg)
    payload = spec.to_json()
    _emit(payload, cfg.out)
    return payload, f"solved weber gamma={cfg.gamma}: c={spec.c:.12g} residual={spec.residual:.3e}"


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "mesh": cmd_mesh,
            "classify": cmd_classify, "nonexist": cmd_nonexist, "weber": cmd_weber}


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msforge", description="Minimal surfaces from Weierstrass data.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-period", type=float, default=None,
                        help="period tolerance (env MSFORGE_TOL_PERIOD, default 1e-8)")
    common.add_argument("--out", "-o", default=None, help="output path")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve the period problem")
    s.add_argument("--family", required=True, choices=["genus", "even", "weber", "catenoid"])
    s.add_argument("--gamma", type=int)
    s.add_argument("--k", type=int)

    for name, helptext in (("verify", "check periods, ends, curvature and symmetry"),
                           ("mesh", "write an OBJ or PLY mesh and a JSON sidecar")):
        v = sub.add_parser(name, parents=[common], help=helptext)
        v.add_argument("params", nargs="?", help="parameters JSON written by solve")
        v.add_argument("--family", choices=["catenoid"], help="use a builtin surface")
        v.add_argument("--mesh-res", default=None, help="NUxNTHETA (env MSFORGE_MESH_RES)")
        v.add_argument("--umax", type=float, default=4.0, help="log-radius cutoff of the grid")
        if name == "verify":
            v.add_argument("--samples", type=int, default=1000)
            v.add_argument("--seed", type=int, default=0)
            v.add_argument("--tol-symmetry", type=float, default=DEFAULT_TOL_SYMMETRY)
        else:
            v.add_argument("--force", action="store_true", help="mesh even if periods fail")

    c = sub.add_parser("classify", parents=[common], help="ramification tables")
    c.add_argument("--gamma", type=int, required=True)

    n = sub.add_parser("nonexist", parents=[common], help="obstruction report for an excluded candidate")
    n.add_argument("--case", required=True)

    w = sub.add_parser("weber", parents=[common], help="solve the two-sheeted family")
    w.add_argument("--gamma", type=int, required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        payload, summary = COMMANDS[cfg.command](cfg)
    except periods.ConvergenceError as exc:
        return _error("non-convergence", str(exc), EXIT_NONCONVERGED, report=getattr(exc, "report", None))
    except geometry.TornMeshError as exc:
        return _error("torn-mesh", str(exc), EXIT_INVALID)
    except ValueError as exc:
        return _error("validation", str(exc), EXIT_INVALID)
    print(summary)
    if cfg.command == "verify":
        return EXIT_OK if payload.get("passed") else EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
