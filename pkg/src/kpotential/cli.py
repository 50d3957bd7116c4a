"""Command-line front end: ``kpotential {check,realize,hydro,signatures}``.

Each run command reads a JSON job config, evaluates its residuals at sample
points (or over a grid) and writes a deterministic JSON report. The exit code
is 0 when every check passes, 1 when some check fails and 2 on bad input.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import JobConfig, load_config
from .errors import (BadVariableSupport, ConfigError, DimensionMismatch, GridTooCoarse, RangeError,
                     Singular, StepTooLarge)
from .frobenius import Residual, wdvv_tensor
from .geometry import (Connection, admissible_signatures, gauss_tensor, potential_gauss_tensor,
                       ricci_tensor, second_forms)
from .hydro import (abc_from_f, eqf_residual, operators_n3, shdt_residual, weingarten_n3)
from .linalg import inertia
from .potential import extract_f, third_tensor
from .realization import (diagonalizing_transform, path_independence, realize_grid,
                          verify_second_forms)

SCHEMA = 1

DEFAULT_THRESHOLDS = {
    "wdvv": 1e-10,
    "gauss": 1e-10,
    "ricci": 1e-10,
    "gauss_from_ricci": 1e-12,
    "curvature": 1e-10,
    "skewness": 1e-12,
    "first_form": 1e-8,
    "gram_drift": 1e-8,
    "path_independence": 1e-6,
    "second_form": 5e-3,
    "eqf": 1e-10,
    "shdt": 1e-10,
    "commutation": 1e-10,
}


# -- deterministic JSON ------------------------------------------------------

def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return "[" + ", ".join(_emit(x, indent, level) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(x, indent, level + 1) for x in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return repr(x)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def dumps_report(report) -> str:
    """Serialize with sorted keys and shortest round-trip floats, so equal inputs give equal bytes."""
    return _emit(report, 2, 0) + "\n"


# -- check accumulation ------------------------------------------------------

class _Worst:
    """Running max-abs of a residual over sample points."""

    def __init__(self, threshold):
        self.threshold = float(threshold)
        self.max_abs = 0.0
        self.point = None
        self.indices = []
        self.value = 0.0

    def update(self, res: Residual, point):
        if self.point is None or res.max_abs > self.max_abs:
            self.max_abs = res.max_abs
            self.point = [float(x) for x in point]
            self.indices = list(res.indices)
            self.value = res.value

    def report(self):
        return {
            "max_abs": self.max_abs,
            "worst_point": self.point,
            "worst_indices": self.indices,
            "worst_value": self.value,
            "threshold": self.threshold,
            "pass": bool(self.max_abs <= self.threshold),
        }


def _thresholds(cfg: JobConfig):
    th = dict(DEFAULT_THRESHOLDS)
    th.update(cfg.thresholds)
    return th


def _header(cfg: JobConfig, command):
    return {
        "schema": SCHEMA,
        "tool": "kpotential",
        "version": __version__,
        "command": command,
        "config_digest": cfg.digest(),
        "potential": cfg.potential_label,
        "N": cfg.n,
        "k": cfg.spec.k,
        "p": cfg.spec.p,
        "seed": cfg.seed,
    }


def _finish(report, checks):
    report["checks"] = {name: w.report() for name, w in checks.items()}
    report["pass"] = all(c["pass"] for c in report["checks"].values())
    return report


def run_check(cfg: JobConfig) -> dict:
    """WDVV, Gauss, Ricci, the Gauss-from-Ricci identity, flatness and skewness at the sample points."""
    th = _thresholds(cfg)
    names = ["wdvv", "gauss", "ricci", "gauss_from_ricci", "curvature", "skewness"]
    checks = {name: _Worst(th[name]) for name in names}
    conn = Connection(cfg.phi, cfg.eta, cfg.spec)
    total = float(np.sum(cfg.spec.crs))
    for u in cfg.sample_points:
        t = third_tensor(cfg.phi, u)
        forms = second_forms(t, cfg.spec)
        checks["wdvv"].update(Residual.of(wdvv_tensor(t, conn.eta_inv)), u)
        g = gauss_tensor(forms, conn.mu_upper)
        checks["gauss"].update(Residual.of(g), u)
        checks["ricci"].update(Residual.of(ricci_tensor(forms, conn.eta_inv)), u)
        checks["gauss_from_ricci"].update(Residual.of(g - total * potential_gauss_tensor(t, conn.eta_inv)), u)
        checks["curvature"].update(Residual.of(conn.curvature(u)), u)
        a = conn.matrices(u)
        checks["skewness"].update(Residual.of(np.transpose(a, (0, 2, 1)) @ conn.gram + conn.gram @ a), u)
    report = _header(cfg, "check")
    report["n_points"] = int(len(cfg.sample_points))
    report["crs_sum"] = total
    return _finish(report, checks)


def run_realize(cfg: JobConfig, diagonalize=False):
    """Realize over the configured grid; return ``(report, csv_text)``."""
    if cfg.grid is None:
        raise ConfigError("grid", "required for realize")
    th = _thresholds(cfg)
    n = cfg.n
    u0 = np.zeros(n) if cfg.base_point is None else cfg.base_point
    if not cfg.grid.contains(u0):
        raise ConfigError("base_point", f"{u0.tolist()} lies outside the grid box")
    real = realize_grid(cfg.phi, cfg.eta, cfg.spec, cfg.grid, u0, cfg.step)
    checks = {name: _Worst(th[name]) for name in ("first_form", "gram_drift")}
    for idx in np.ndindex(*cfg.grid.steps):
        st = real.state(idx)
        t = st.tangents
        checks["first_form"].update(Residual.of(t.T @ st.metric @ t - cfg.eta), st.u)
        checks["gram_drift"].update(Residual.of(st.gram() - st.metric), st.u)
    try:
        sf = verify_second_forms(real, cfg.phi, cfg.spec)
    except GridTooCoarse as exc:
        raise ConfigError("grid.steps", str(exc)) from None
    checks["second_form"] = _Worst(th["second_form"])
    checks["second_form"].update(Residual(sf.max_abs, (), sf.max_abs), sf.worst_point)
    far = np.array(cfg.grid.hi)
    if np.array_equal(far, u0):
        far = np.array(cfg.grid.lo)
    checks["path_independence"] = _Worst(th["path_independence"])
    if not np.array_equal(far, u0):
        pi = path_independence(cfg.phi, cfg.eta, cfg.spec, u0, far, cfg.step)
        checks["path_independence"].update(Residual(pi, (), pi), far)

    us, rs = real.rows()
    if diagonalize:
        rs = rs @ diagonalizing_transform(real.metric).T
    centered = rs - rs.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0] if sv.size else 1.0)))
    report = _header(cfg, "realize")
    ine = inertia(real.metric)
    report.update({
        "ambient_dim": int(real.metric.shape[0]),
        "ambient_inertia": [ine.positive, ine.negative],
        "ambient_signature": ine.signature,
        "grid": {"min": list(cfg.grid.lo), "max": list(cfg.grid.hi), "steps": list(cfg.grid.steps)},
        "base_point": [float(x) for x in u0],
        "integrator_step": cfg.step,
        "nodes": int(len(us)),
        "affine_rank": rank,
        "diagonalized": bool(diagonalize),
        "second_form_parts": {"potential": sf.potential_part, "extra": sf.extra_part},
    })
    d = rs.shape[1]
    header = [f"u{i + 1}" for i in range(n)] + [f"z{i + 1}" for i in range(d)]
    lines = [",".join(header)]
    for u, r in zip(us, rs):
        lines.append(",".join(repr(float(x)) for x in np.concatenate([u, r])))
    return _finish(report, checks), "\n".join(lines) + "\n"


def run_hydro(cfg: JobConfig) -> dict:
    """Reduced-equation and hydrodynamic-system residuals plus multiplication operators (N = 3 only)."""
    if cfg.n != 3:
        raise ConfigError("potential", f"hydro needs an N = 3 potential, got N = {cfg.n}")
    try:
        f = extract_f(cfg.phi)
    except (BadVariableSupport, DimensionMismatch, ValueError) as exc:
        raise ConfigError("potential", f"not of the assembled N = 3 form: {exc}") from None
    th = _thresholds(cfg)
    checks = {name: _Worst(th[name]) for name in ("eqf", "shdt", "commutation")}
    samples = []
    for u in cfg.sample_points:
        q = u[1:]
        checks["eqf"].update(Residual.of(np.array([eqf_residual(f, q)])), u)
        checks["shdt"].update(Residual.of(shdt_residual(f, q)), u)
        ops = operators_n3(f, q)
        checks["commutation"].update(Residual.of(ops[1] @ ops[2] - ops[2] @ ops[1]), u)
        abc = abc_from_f(f, q)
        w = weingarten_n3(abc)
        samples.append({"point": [float(x) for x in u], "abc": abc.as_array().tolist(),
                        "w2": w[1].tolist(), "w3": w[2].tolist()})
    report = _header(cfg, "hydro")
    report["n_points"] = int(len(cfg.sample_points))
    report["samples"] = samples
    return _finish(report, checks)


def run_signatures(n, s, k, p) -> dict:
    return {"schema": SCHEMA, "tool": "kpotential", "version": __version__, "command": "signatures",
            "N": n, "s": s, "k": k, "p": p, "signatures": sorted(admissible_signatures(n, s, k, p))}


# -- argument handling -------------------------------------------------------

def _threshold_arg(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold {name!r} is not a number: {value!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="kpotential", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kpotential {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("check", "evaluate algebraic and flatness residuals"),
                        ("realize", "integrate the frame over a grid and export points"),
                        ("hydro", "N = 3 reduced-equation residuals")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON job config")
        p.add_argument("--out", help="output file (directory for realize)")
        p.add_argument("--seed", type=int, help="override the sampling seed")
        p.add_argument("--threshold", action="append", type=_threshold_arg, default=[],
                       metavar="NAME=VALUE", help="override a pass threshold (repeatable)")
        if name == "realize":
            p.add_argument("--diagonalize", action="store_true",
                           help="export coordinates in a basis where the ambient metric is diag(+-1)")
    p = sub.add_parser("signatures", help="list admissible ambient signatures")
    for arg in ("N", "s", "k", "p"):
        p.add_argument(arg, type=int)
    p.add_argument("--out", help="output file")
    return parser


def _write(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "signatures":
            _write(dumps_report(run_signatures(args.N, args.s, args.k, args.p)), args.out)
            return 0
        cfg = load_config(args.config, seed=args.seed, thresholds=dict(args.threshold))
        if args.command == "check":
            report = run_check(cfg)
            _write(dumps_report(report), args.out)
        elif args.command == "hydro":
            report = run_hydro(cfg)
            _write(dumps_report(report), args.out)
        else:
            report, csv_text = run_realize(cfg, args.diagonalize)
            out = Path(args.out or "realization")
            out.mkdir(parents=True, exist_ok=True)
            (out / "points.csv").write_text(csv_text)
            (out / "report.json").write_text(dumps_report(report))
    except (ConfigError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Singular as exc:
        print(f"error: degenerate input: {exc}", file=sys.stderr)
        return 2
    except StepTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0 if report["pass"] else 1
