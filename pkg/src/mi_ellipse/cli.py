"""Command-line front end.

Every subcommand loads a body (a JSON file or a builtin fixture name),
runs one computation and prints JSON or CSV.  Exit status is 0 on success,
2 for bad input and 3 for numerical failure, with a one-line diagnostic on
standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .body import load_body
from .conic import CenteredEllipse, unit_disk
from .errors import InputError, IoError, MIEllipseError
from .extremal import john_ellipse, loewner_ellipse
from .intersect import find_crossings, intersection_area, intersection_profile, symdiff_distance
from .oracle import clip_intersection, crossing_step, fd_derivative, grid_search_mi, mc_intersection
from .position import check_mi_position, isotropic_weights
from .solver import mi_ellipse, mi_family, sandwich_range
from .variation import deriv1, deriv2, deriv2_lower_bound, profile, residual_D

COMMANDS = ("area", "crossings", "derivs", "profile", "john", "loewner", "mi", "family",
            "check-position", "isotropic", "oracle", "plot", "fig1")
ORACLE_TARGETS = ("area", "derivs", "mi")
VIEW = 2.2
SVG_SIZE = 440
SVG_POINTS = 720
STYLES = {"body": "#222222", "unit": "#999999", "john": "#1f77b4",
          "loewner": "#d62728", "mi": "#2ca02c"}


@dataclass
class RunConfig:
    command: str = ""
    body: str = "fig1"
    ellipse: str | None = None
    lam: float | None = None
    steps: int = 9
    tol: float = 1e-7
    seed: int = 0
    out: str | None = None
    digits: int = 17
    method: str = "analytic"
    samples: int = 1_000_000
    t_min: float = -2.0
    t_max: float = 2.0
    log_concavity: bool = False
    check_position: bool = False
    target: str | None = None


# ----------------------------------------------------------------- formatting

def _num(x, digits):
    return float(f"{x:.{digits}g}")


def _rounded(obj, digits):
    if isinstance(obj, float):
        return _num(obj, digits)
    if isinstance(obj, complex):
        return {"re": _num(obj.real, digits), "im": _num(obj.imag, digits)}
    if isinstance(obj, dict):
        return {k: _rounded(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v, digits) for v in obj]
    if isinstance(obj, np.generic):
        return _rounded(obj.item(), digits)
    return obj


def _csv(header, rows, digits):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.{digits}g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj, digits):
    return json.dumps(_rounded(obj, digits), indent=2) + "\n"


def _emit(text, cfg):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------------ SVG

def _fmt(v):
    # round first so tiny negatives do not print as -0.000000
    return f"{round(float(v), 6) + 0.0:.6f}"


def _path(points):
    pts = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in points)
    return f'<polygon points="{pts}" fill="none"'


def emit_svg(body, ellipses, path):
    """Write ``body`` and labelled ellipses as a deterministic SVG.

    ``ellipses`` is a sequence of ``(label, CenteredEllipse)``.  Coordinates
    are printed with six decimals in a fixed ``[-2.2, 2.2]^2`` view, so the
    output is byte-stable.
    """
    if body.kind == "polygon":
        outline = np.asarray(body.vertices, dtype=float)
    else:
        outline = body.boundary_points(SVG_POINTS)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="{-VIEW} {-VIEW} {2 * VIEW} {2 * VIEW}">',
        f'<rect x="{-VIEW}" y="{-VIEW}" width="{2 * VIEW}" height="{2 * VIEW}" fill="white"/>',
        f'{_path(outline)} stroke="{STYLES["body"]}" stroke-width="0.02" id="body"/>',
    ]
    for label, e in ellipses:
        color = STYLES.get(label, "#555555")
        lines.append(f'{_path(e.boundary(SVG_POINTS))} stroke="{color}" '
                     f'stroke-width="0.015" id="{label}"/>')
    lines.append("</svg>")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


# ------------------------------------------------------------------- commands

def _ellipse(cfg):
    if cfg.ellipse is None:
        return unit_disk()
    data = json.loads(cfg.ellipse)
    if "ellipse" in data:
        data = data["ellipse"]
    return CenteredEllipse.from_json(data)


def _lambda(cfg):
    return np.pi if cfg.lam is None else cfg.lam


def cmd_area(cfg, body):
    e = _ellipse(cfg)
    out = {"area": intersection_area(body, e), "symdiff": symdiff_distance(body, e),
           "body_area": body.area, "ellipse_area": e.area}
    return _json(out, cfg.digits)


def cmd_crossings(cfg, body):
    cs = find_crossings(body, _ellipse(cfg))
    rows = [(k + 1, float(c.xi), c.parity, float(c.alpha), int(c.tangency_flag))
            for k, c in enumerate(cs.crossings)]
    return _csv(["index", "xi", "parity", "alpha", "tangency"], rows, cfg.digits)


def cmd_derivs(cfg, body):
    cs = find_crossings(body, _ellipse(cfg))
    d1, d2 = deriv1(cs), deriv2(cs)
    out = {"d1": d1, "d2": d2, "minus_d2": -d2, "bound": deriv2_lower_bound(profile(cs)),
           "D": residual_D(cs), "crossings": 4 * cs.n}
    return _json(out, cfg.digits)


def cmd_profile(cfg, body):
    t, I = intersection_profile((cfg.t_min, cfg.t_max), body, cfg.steps)
    text = _csv(["t", "intersection"], [(float(a), float(b)) for a, b in zip(t, I)], cfg.digits)
    if cfg.log_concavity:
        # exploratory only: second differences of log I should be <= 0
        d2 = np.diff(np.log(I), 2)
        bad = int(np.count_nonzero(d2 > 1e-12))
        sys.stderr.write(f"log-concavity violations: {bad} of {d2.size}\n")
    return text


def _extremal_json(res, cfg):
    return _json({"ellipse": res.ellipse.to_json(), "form": res.ellipse.form.tolist(),
                  "optimality_gap": res.optimality_gap}, cfg.digits)


def cmd_john(cfg, body):
    return _extremal_json(john_ellipse(body, cfg.tol), cfg)


def cmd_loewner(cfg, body):
    return _extremal_json(loewner_ellipse(body, cfg.tol), cfg)


def cmd_mi(cfg, body):
    return _json(mi_ellipse(body, _lambda(cfg), cfg.tol).to_json(), cfg.digits)


def cmd_family(cfg, body):
    fam = mi_family(body, cfg.steps, cfg.tol)
    rows = [(lam, r.ellipse.t, r.ellipse.phi, r.intersection, r.residual) for lam, r in fam]
    return _csv(["lambda", "t", "phi", "intersection", "residual"], rows, cfg.digits)


def cmd_check_position(cfg, body):
    rep = check_mi_position(body, tol=max(cfg.tol, 1e-6))
    return _json(rep.to_json(), cfg.digits)


def cmd_isotropic(cfg, body):
    rep = check_mi_position(body, tol=max(cfg.tol, 1e-6))
    m = isotropic_weights(rep.crossings, tol=max(cfg.tol, 1e-6))
    out = {"is_mi": rep.is_mi, "residual": rep.residual}
    out.update(m.to_json())
    return _json(out, cfg.digits)


def cmd_oracle(cfg, body):
    target = cfg.target or "area"
    if target == "area":
        e = _ellipse(cfg)
        method = "clip" if cfg.method == "analytic" else cfg.method
        if method == "mc":
            est = mc_intersection(body, e, cfg.samples, cfg.seed)
        elif method == "clip":
            est = clip_intersection(body, e)
        else:
            raise InputError(f"oracle area supports --method mc|clip, not {method}")
        out = est.to_json()
        out["analytic"] = intersection_area(body, e)
        return _json(out, cfg.digits)
    if target == "derivs":
        cs = find_crossings(body)
        h = crossing_step(cs.alpha.min()) if cs.transverse else 1e-3
        d1 = fd_derivative(body, 1, h / 10, extrapolate=True)
        d2 = fd_derivative(body, 2, h, extrapolate=True)
        return _json({"fd1": d1.value, "fd2": d2.value, "h": h, "method": "fd"}, cfg.digits)
    est = grid_search_mi(body, _lambda(cfg))
    return _json(est.to_json(), cfg.digits)


def cmd_plot(cfg, body):
    if not cfg.out:
        raise InputError("plot needs --out")
    john, loewner = sandwich_range(body, cfg.tol)
    items = [("unit", unit_disk()), ("john", john.ellipse), ("loewner", loewner.ellipse)]
    lam = _lambda(cfg)
    if john.ellipse.area <= lam <= loewner.ellipse.area:
        items.append(("mi", mi_ellipse(body, lam, cfg.tol, extremal=(john, loewner)).ellipse))
    emit_svg(body, items, cfg.out)
    return ""


def cmd_fig1(cfg, body):
    body = load_body("fig1")
    rep = check_mi_position(body)
    out = {"is_mi": rep.is_mi, "residual": rep.residual, "quarter_turn": rep.quarter_turn,
           "crossings": [float(x) for x in rep.crossings.xi]}
    if not cfg.check_position:
        john, loewner = sandwich_range(body, cfg.tol)
        out["area"] = body.area
        out["john_area"] = john.ellipse.area
        out["loewner_area"] = loewner.ellipse.area
    return _json(out, cfg.digits)


HANDLERS = {
    "area": cmd_area, "crossings": cmd_crossings, "derivs": cmd_derivs,
    "profile": cmd_profile, "john": cmd_john, "loewner": cmd_loewner, "mi": cmd_mi,
    "family": cmd_family, "check-position": cmd_check_position,
    "isotropic": cmd_isotropic, "oracle": cmd_oracle, "plot": cmd_plot, "fig1": cmd_fig1,
}


# --------------------------------------------------------------------- parser

def build_parser():
    d = RunConfig()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", default=d.body, help="JSON file or builtin name (default: fig1)")
    common.add_argument("--ellipse", default=d.ellipse, help="ellipse JSON {t, phi, area} or {form}")
    common.add_argument("--lambda", dest="lam", type=float, default=d.lam,
                        help="target ellipse area (default: pi)")
    common.add_argument("--steps", type=int, default=d.steps)
    common.add_argument("--tol", type=float, default=d.tol)
    common.add_argument("--seed", type=int, default=d.seed)
    common.add_argument("--out", default=d.out, help="output path (default: stdout)")
    common.add_argument("--digits", type=int, default=d.digits, help="significant digits")
    common.add_argument("--method", choices=["analytic", "mc", "clip", "grid"], default=d.method)
    common.add_argument("--samples", type=int, default=d.samples, help="Monte Carlo samples")
    common.add_argument("--show-config", action="store_true", help="print the configuration and exit")

    p = argparse.ArgumentParser(prog="mi-ellipse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "profile":
            sp.add_argument("--t-min", type=float, default=d.t_min)
            sp.add_argument("--t-max", type=float, default=d.t_max)
            sp.add_argument("--log-concavity", action="store_true",
                            help="report (without asserting) log-concavity violations")
        if name == "fig1":
            sp.add_argument("--check-position", action="store_true")
        if name == "oracle":
            sp.add_argument("target", nargs="?", choices=ORACLE_TARGETS, default="area")
    return p


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    cfg = RunConfig()
    for key, value in vars(ns).items():
        if hasattr(cfg, key):
            setattr(cfg, key, value)
    return cfg, ns.show_config


def run(argv=None):
    """Parse ``argv``, run the subcommand and return the exit code."""
    try:
        cfg, show = parse_config(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if show:
        sys.stdout.write(json.dumps(asdict(cfg), indent=2) + "\n")
        return 0
    try:
        body = load_body(cfg.body) if cfg.command != "fig1" else None
        text = HANDLERS[cfg.command](cfg, body)
        if text:
            _emit(text, cfg)
    except MIEllipseError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
