"""``polygonflow`` command-line driver.

Exit codes: 0 success, 2 invalid input or configuration, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from polygonflow import ellipse as ell
from polygonflow import fileio
from polygonflow.config import RunConfig, config_from_mapping, parse_config
from polygonflow.errors import InvalidInput, PolygonFlowError, ValidationError
from polygonflow.harmonic import predict_vertex_vectors, predicted_trace, project_D2, rotation_number
from polygonflow.hetero import limit_prediction
from polygonflow.periodicity import period_report
from polygonflow.polygon import (
    NORMALIZED,
    Polygon,
    PerSegment,
    Uniform,
    build_transform,
    centroid,
    iterate,
    max_vertex_distance,
    random_polygon,
)
from polygonflow.spectral import damping_factor, eigenvalues

COMMANDS = ("gen", "iterate", "spectrum", "predict", "ellipse", "period", "hetero", "sweep")


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        fileio._write_text(text, path)


def _polygon(cfg: RunConfig) -> Polygon:
    if cfg.input_path is not None:
        return fileio.read_polygon_csv(cfg.input_path)
    if cfg.n is None or cfg.seed is None:
        raise ValidationError("seed", "need n and seed, or input_path")
    return random_polygon(cfg.n, cfg.seed, cfg.half_width)


def _require_n(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ValidationError("n", "required for this command")
    return cfg.n


def _uniform_xi(cfg: RunConfig) -> float:
    if not isinstance(cfg.scheme, Uniform):
        raise ValidationError("xi", "a uniform division point is required for this command")
    return cfg.scheme.xi


def _scheme_for(cfg: RunConfig, n: int):
    if cfg.scheme is None:
        raise ValidationError("xi", "a division scheme (xi or xi_list) is required")
    if isinstance(cfg.scheme, PerSegment) and len(cfg.scheme.xis) != n:
        raise ValidationError("xi_list", f"has {len(cfg.scheme.xis)} entries but polygon has {n} vertices")
    return cfg.scheme


def _scheme_json(scheme):
    if isinstance(scheme, Uniform):
        return scheme.xi
    return list(scheme.xis)


def _run_report(p: Polygon, scheme, cfg: RunConfig, trace=None) -> dict:
    """Summary of one iteration run; shared by ``iterate`` and ``sweep``."""
    if trace is None:
        trace = iterate(p, scheme, cfg.steps, cfg.mode)
    last = trace.snapshot(trace.steps)
    c0 = centroid(p)
    report = {
        "n": p.n,
        "scheme": _scheme_json(scheme),
        "steps": cfg.steps,
        "mode": cfg.mode,
        "centroid": list(c0),
        "final_centroid": list(centroid(last)),
        "final_max_distance": max_vertex_distance(last, centroid(last)),
        "final_norms": trace.norms[-1].tolist(),
    }
    if cfg.mode == NORMALIZED:
        try:
            fit = ell.fit_ellipse(last.vertices())
            report["ellipse_fit"] = {
                "center": list(fit.center),
                "semi_axes": list(fit.semi_axes),
                "angle_rad": fit.angle,
            }
        except PolygonFlowError:
            report["ellipse_fit"] = None
        if isinstance(scheme, Uniform):
            pu = project_D2(trace.xs[0])
            pv = project_D2(trace.ys[0])
            if pu.theta is not None and pv.theta is not None:
                report["predicted"] = ell.ellipse_report(pu.theta, pv.theta, p.n, scheme.xi, trace.steps)
    return report


def cmd_gen(cfg):
    _emit(fileio.polygon_csv_text(_polygon(cfg)), cfg.out_polygon or cfg.out_trace)


def cmd_iterate(cfg):
    p = _polygon(cfg)
    scheme = _scheme_for(cfg, p.n)
    trace = iterate(p, scheme, cfg.steps, cfg.mode)
    if cfg.out_trace:
        fileio.write_trace_csv(trace, cfg.out_trace)
    if cfg.out_svg:
        fileio.write_svg(fileio.scene_from_trace(trace), cfg.out_svg)
    _emit(fileio.json_text(_run_report(p, scheme, cfg, trace)), cfg.out_report)


def cmd_spectrum(cfg):
    n = _require_n(cfg)
    xi = _uniform_xi(cfg)
    lam = eigenvalues(n, xi)
    rows = ["j,re_lambda,im_lambda,abs_lambda"]
    rows += [f"{j},{fileio.fmt(v.real)},{fileio.fmt(v.imag)},{fileio.fmt(abs(v))}" for j, v in enumerate(lam)]
    _emit("\n".join(rows) + "\n", cfg.out_trace)
    summary = {"n": n, "xi": xi, "rho": None, "rho_closed": None, "rho_printed": None, "argmin_xi": None}
    if n >= 5:
        rep = damping_factor(n, xi)
        summary.update(rho=rep.rho, rho_closed=rep.rho_closed, rho_printed=rep.rho_printed,
                       argmin_xi=rep.argmin_xi)
    _emit(fileio.json_text(summary), cfg.out_report)


def cmd_predict(cfg):
    n = _require_n(cfg)
    xi = _uniform_xi(cfg)
    k = cfg.steps if cfg.k is None else cfg.k
    u, v = predict_vertex_vectors(cfg.theta_u, cfg.theta_v, n, xi, k)
    _emit(fileio.vertices_csv_text(k, u, v), cfg.out_trace)


def cmd_ellipse(cfg):
    n = _require_n(cfg)
    xi = _uniform_xi(cfg)
    k = cfg.steps if cfg.k is None else cfg.k
    _emit(fileio.json_text(ell.ellipse_report(cfg.theta_u, cfg.theta_v, n, xi, k)), cfg.out_report)


def cmd_period(cfg):
    n = _require_n(cfg)
    xi = _uniform_xi(cfg)
    trace = predicted_trace(cfg.theta_u, cfg.theta_v, n, xi, max(cfg.steps, 2))
    rep = period_report(n, xi, cfg.qmax, trace)
    _emit(fileio.json_text(rep.to_dict()), cfg.out_report)


def cmd_hetero(cfg):
    p = _polygon(cfg)
    scheme = _scheme_for(cfg, p.n)
    T = build_transform(p.n, scheme)
    pred = limit_prediction(p, T)
    trace = iterate(p, scheme, cfg.steps, "unnormalized")
    last = trace.snapshot(trace.steps)
    emp = (float(np.mean(last.xs)), float(np.mean(last.ys)))
    out = {
        "weights": pred.weights.tolist(),
        "limit_point": list(pred.point),
        "centroid": list(centroid(p)),
        "empirical_limit": list(emp),
        "max_deviation": max_vertex_distance(last, pred.point),
        "spectral_gap": pred.spectral_gap,
        "steps": cfg.steps,
    }
    _emit(fileio.json_text(out), cfg.out_report)


def _task_path(path: Optional[str], xi: float) -> Optional[str]:
    if path is None:
        return None
    p = Path(path)
    return str(p.with_name(f"{p.stem}.xi{xi:g}{p.suffix}"))


def cmd_sweep(cfg):
    if cfg.n is None and cfg.input_path is None:
        cfg.n = 20
    p = _polygon(cfg)

    def task(xi):
        scheme = Uniform(xi)
        trace = iterate(p, scheme, cfg.steps, cfg.mode)
        if cfg.out_trace:
            fileio.write_trace_csv(trace, _task_path(cfg.out_trace, xi))
        if cfg.out_svg:
            fileio.write_svg(fileio.scene_from_trace(trace), _task_path(cfg.out_svg, xi))
        rep = _run_report(p, scheme, cfg, trace)
        rep["modulus"] = rotation_number(p.n, xi).modulus
        if p.n >= 5:
            rep["rho"] = damping_factor(p.n, xi).rho
        return rep

    limit = os.environ.get("POLYGONFLOW_THREADS")
    workers = max(1, int(limit)) if limit else min(len(cfg.sweep_xis), os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(task, cfg.sweep_xis))
    _emit(fileio.json_text({"n": p.n, "steps": cfg.steps, "mode": cfg.mode, "results": results}),
          cfg.out_report)


_DISPATCH = {
    "gen": cmd_gen, "iterate": cmd_iterate, "spectrum": cmd_spectrum,
    "predict": cmd_predict, "ellipse": cmd_ellipse, "period": cmd_period,
    "hetero": cmd_hetero, "sweep": cmd_sweep,
}


def run(command: str, config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        _DISPATCH[command](config)
    except KeyError:
        print(f"polygonflow: unknown command {command!r}", file=sys.stderr)
        return 2
    except InvalidInput as exc:
        print(f"polygonflow: {exc}", file=sys.stderr)
        return 2
    except (PolygonFlowError, OSError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"polygonflow: {exc}", file=sys.stderr)
        return 1
    return 0


def _xi_list(text: str):
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polygonflow", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON configuration file; flags override its values")
    ap.add_argument("--n", type=int)
    grp = ap.add_mutually_exclusive_group()
    grp.add_argument("--xi", type=float)
    grp.add_argument("--xi-list", type=_xi_list, help="per-segment points: a,b,c or a JSON array")
    ap.add_argument("--steps", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--mode", choices=("normalized", "unnormalized"))
    ap.add_argument("--input", dest="input_path")
    ap.add_argument("--out-trace")
    ap.add_argument("--out-svg")
    ap.add_argument("--out-report")
    ap.add_argument("--out-polygon")
    ap.add_argument("--qmax", type=int)
    ap.add_argument("--theta-u", type=float)
    ap.add_argument("--theta-v", type=float)
    ap.add_argument("--k", type=int)
    ap.add_argument("--half-width", type=float)
    ap.add_argument("--sweep-xi", dest="sweep_xis", type=_xi_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = {}
        if args.config:
            text = Path(args.config).read_text(encoding="utf-8")
            parse_config(text)  # validates the file on its own first
            data = json.loads(text)
        flags = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config") and v is not None}
        if "xi_list" in flags:
            data.pop("xi", None)
        if "xi" in flags:
            data.pop("xi_list", None)
        data.update(flags)
        cfg = config_from_mapping(data)
    except InvalidInput as exc:
        print(f"polygonflow: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"polygonflow: cannot read config: {exc}", file=sys.stderr)
        return 2
    return run(args.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
