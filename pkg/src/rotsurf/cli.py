"""Command-line front end: portraits, classification, curves, meshes, checks.

All numeric output is plain text (JSON / CSV / OBJ) at 17 significant
digits, deterministic byte-for-byte for a given config.  Exit codes: 0 ok,
2 invalid input, 3 numeric failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import InvalidLambdaError, RotsurfError
from .field import PhasePoint
from .integrate import IntegratorConfig, concat, integrate, launch_separatrix, reflect
from .profile import (
    ExtensionSpec,
    ProfileCurve,
    build_profile,
    cylinder_profile,
    extend_separatrix,
    separatrix_profile,
    sphere_profile,
    verify_profile,
)
from .shooting import SEPARATRIX, SPHERE, classify_lambda, find_lambda0, portrait
from .surface import export_mesh_csv, export_obj, revolve


@dataclass
class RunConfig:
    """Integrator settings merged from defaults, a key=value file, and flags."""

    rel_tol: float = IntegratorConfig.rel_tol
    abs_tol: float = IntegratorConfig.abs_tol
    boundary_eps: float = IntegratorConfig.boundary_eps
    max_step: float = IntegratorConfig.max_step
    min_step: float = IntegratorConfig.min_step
    max_time: float = IntegratorConfig.max_time

    def integrator(self, **overrides) -> IntegratorConfig:
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw.update(overrides)
        return IntegratorConfig(**kw)


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _merge_run_config(args) -> RunConfig:
    file_vals = _load_config_file(args.config) if args.config else {}
    rc = RunConfig()
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(rc, f.name, float(flag))
        elif f.name in file_vals:
            setattr(rc, f.name, float(file_vals[f.name]))
    return rc


# -- deterministic JSON (floats at 17 significant digits) -----------------


def _json(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ",".join(f"{_json(str(k))}:{_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        return "[" + ",".join(_json(v) for v in obj) + "]"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return format(float(obj), ".17g")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# -- lambda specs ----------------------------------------------------------


def _parse_lambdas(spec: str) -> list[float]:
    """Comma list (1.2,2.5) and/or colon ranges (2:4:0.5, endpoint included)."""
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ":" in tok:
            parts = tok.split(":")
            if len(parts) != 3:
                raise ValueError(f"range spec must be lo:hi:step, got {tok!r}")
            lo, hi, step = (float(p) for p in parts)
            if step <= 0.0 or hi < lo:
                raise ValueError(f"bad range {tok!r}")
            n = int(math.floor((hi - lo) / step + 1e-12))
            out.extend(lo + k * step for k in range(n + 1))
        else:
            out.append(float(tok))
    if not out:
        raise ValueError("empty lambda spec")
    if any(l <= 1.0 for l in out):
        raise ValueError("all lambdas must exceed 1")
    return out


# -- commands --------------------------------------------------------------


def cmd_portrait(args) -> int:
    lams = _parse_lambdas(args.lambdas) if args.lambdas else []
    cfg = _merge_run_config(args).integrator()
    rep = portrait(lams, cfg, tol_lambda0=args.tol)
    doc = {
        "lambda0": {
            "value": rep.lambda0.value,
            "bracket": list(rep.lambda0.bracket),
        },
        "entries": [],
    }
    for entry in rep.entries:
        item = {
            "lambda": entry.lam,
            "class": None if entry.klass is None else entry.klass.tag,
            "polyline": [[p[0], p[1]] for p in entry.polyline],
        }
        if entry.error is not None:
            item["error"] = entry.error
        doc["entries"].append(item)
    _write_text(args.out, _json(doc) + "\n")
    stem = args.out.rsplit(".", 1)[0]
    for k, entry in enumerate(rep.entries):
        lines = ["theta,z"]
        lines += [f"{p[0]:.17g},{p[1]:.17g}" for p in entry.polyline]
        _write_text(f"{stem}_{k:02d}.csv", "\n".join(lines) + "\n")
    print(f"portrait: {len(rep.entries)} entries, lambda0={rep.lambda0.value:.12g} -> {args.out}")
    return 0


def cmd_find_lambda0(args) -> int:
    cfg = _merge_run_config(args).integrator()
    res = find_lambda0(cfg, tol=args.tol)
    launch = launch_separatrix(cfg)
    z_launch = float(launch.zs[-1])
    doc = {
        "bisection": {
            "value": res.value,
            "bracket": list(res.bracket),
            "iterations": res.iterations,
        },
        "launch": {"value": z_launch},
        "difference": abs(res.value - z_launch),
    }
    _write_text(args.out, _json(doc) + "\n")
    print(f"lambda0: bisection={res.value:.12g} launch={z_launch:.12g} "
          f"difference={abs(res.value - z_launch):.3g} -> {args.out}")
    return 0


def _profile_for_lambda(lam: float, span: float, cfg: IntegratorConfig) -> ProfileCurve:
    """Profile on [-span, span]; incomplete cases clamp to their finite span."""
    klass = classify_lambda(lam, cfg)
    if klass.tag == SPHERE:
        prof = sphere_profile()
        keep = np.abs(prof.t) <= span
        if keep.sum() >= 2 and not keep.all():
            prof = ProfileCurve(prof.t[keep], prof.x[keep], prof.z[keep],
                                prof.theta[keep], kind=prof.kind,
                                evaluator=prof.evaluator, meta=dict(prof.meta))
        return prof
    if klass.tag == SEPARATRIX:
        return separatrix_profile(cfg)
    run_cfg = replace(cfg, theta_targets=(), max_time=span)
    back = integrate(PhasePoint(math.pi, lam), "backward", run_cfg)
    full = concat(back, reflect(back, 1))
    return build_profile(full, kind=klass.tag)


def cmd_curve(args) -> int:
    if args.lam is None:
        raise ValueError("curve needs --lambda")
    cfg = _merge_run_config(args).integrator()
    prof = _profile_for_lambda(args.lam, args.span, cfg)
    prof.write_csv(args.out)
    lo, hi = prof.span
    print(f"curve: lambda={args.lam:.12g} kind={prof.kind} span=[{lo:.6g},{hi:.6g}] "
          f"samples={len(prof)} -> {args.out}")
    return 0


def cmd_mesh(args) -> int:
    cfg = _merge_run_config(args).integrator()
    if args.builtin == "sphere":
        prof = sphere_profile()
    elif args.builtin == "cylinder":
        prof = cylinder_profile(args.span, n=max(2, int(round(args.span / 0.01)) + 1))
    elif args.lam is not None:
        prof = _profile_for_lambda(args.lam, args.span, cfg)
    else:
        raise ValueError("mesh needs --builtin sphere|cylinder or --lambda")
    mesh = revolve(prof, args.n_angular)
    if args.out.endswith(".csv"):
        export_mesh_csv(mesh, args.out)
    else:
        export_obj(mesh, args.out)
    print(f"mesh: {mesh.n_profile} x {mesh.n_angular} vertices, "
          f"{len(mesh.faces)} faces -> {args.out}")
    return 0


def cmd_extend(args) -> int:
    segments = tuple(float(s) for s in args.segments.split(",")) if args.segments else ()
    spec = ExtensionSpec(args.copies, segments)
    cfg = _merge_run_config(args).integrator()
    curve, report = extend_separatrix(spec, cfg)
    curve.write_csv(args.out)
    stem = args.out.rsplit(".", 1)[0]
    doc = {
        "h": report.h,
        "junctions": [
            {
                "t": j.t,
                "type": j.junction_type,
                "order": j.order,
                "position_jump": j.position_jump,
                "theta_jump": j.theta_jump,
                "dtheta_jump": j.dtheta_jump,
                "d2theta_jump": j.d2theta_jump,
                "d3theta_jump": j.d3theta_jump,
            }
            for j in report.junctions
        ],
    }
    _write_text(f"{stem}.regularity.json", _json(doc) + "\n")
    orders = ",".join(j.order for j in report.junctions) or "none"
    print(f"extend: copies={args.copies} junction orders: {orders} -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    prof = ProfileCurve.read_csv(args.input)
    rep = verify_profile(prof, args.step)
    ok = (rep.max_curvature_residual <= args.max_residual
          and rep.max_speed_residual <= args.max_speed
          and rep.monotone_violations == 0)
    doc = {
        "max_curvature_residual": rep.max_curvature_residual,
        "max_speed_residual": rep.max_speed_residual,
        "monotone_violations": rep.monotone_violations,
        "n_points": rep.n_points,
        "h": rep.h,
        "end_trim": rep.end_trim,
        "threshold": args.max_residual,
        "speed_threshold": args.max_speed,
        "pass": ok,
    }
    text = _json(doc) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"verify: {'PASS' if ok else 'FAIL'} residual={rep.max_curvature_residual:.3e} "
          f"speed={rep.max_speed_residual:.3e} at h={rep.h:g}")
    return 0 if ok else 4


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="rotsurf", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
        p.add_argument("--boundary-eps", dest="boundary_eps", type=float, default=None)
        p.add_argument("--config", default=None, help="key=value config file")

    p = sub.add_parser("portrait", help="classify a lambda sweep, emit JSON + CSV polylines")
    p.add_argument("--lambdas", required=True, help="comma list and/or lo:hi:step ranges")
    p.add_argument("--tol", type=float, default=1e-8, help="lambda0 bisection tolerance")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("find-lambda0", help="critical height by bisection and series launch")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_find_lambda0)

    p = sub.add_parser("curve", help="emit one profile curve as CSV")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--span", type=float, default=20.0,
                   help="half-width of the time window (clamped for incomplete cases)")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("mesh", help="revolve a profile into a mesh (.obj or .csv)")
    p.add_argument("--builtin", choices=["sphere", "cylinder"], default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--span", type=float, default=6.0)
    p.add_argument("--n-angular", dest="n_angular", type=int, default=64)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("extend", help="glue critical-profile copies with unit-height segments")
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--segments", default="", help="comma list of segment lengths")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="curvature-norm check of an emitted profile CSV")
    p.add_argument("input", help="profile CSV (t,x,z,theta)")
    p.add_argument("--step", type=float, default=1e-3, help="resample step")
    p.add_argument("--max-residual", dest="max_residual", type=float, default=1e-4,
                   help="curvature-norm residual threshold")
    p.add_argument("--max-speed", dest="max_speed", type=float, default=1e-6,
                   help="unit-speed residual threshold")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, InvalidLambdaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RotsurfError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
