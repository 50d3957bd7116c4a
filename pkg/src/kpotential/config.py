"""Job configuration: JSON in, validated objects out.

Every validation failure raises :class:`ConfigError` carrying the dotted path
of the offending field.
"""

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, Singular, UnknownBuiltin
from .geometry import GramSpec
from .linalg import antidiagonal, inertia, symmetric
from .potential import BUILTIN_F, Polynomial, assemble_n3, builtin, parse_rational
from .realization import DEFAULT_STEP, Grid

DEFAULT_SAMPLE_COUNT = 100
DEFAULT_SAMPLE_BOX = (-1.0, 1.0)


@dataclass
class JobConfig:
    raw: dict
    phi: Polynomial
    eta: np.ndarray
    spec: GramSpec
    sample_points: np.ndarray
    seed: int
    grid: Grid = None
    step: float = DEFAULT_STEP
    base_point: np.ndarray = None
    thresholds: dict = field(default_factory=dict)
    potential_label: str = "literal"

    @property
    def n(self):
        return self.phi.nvars

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _number(x, path):
    if isinstance(x, bool):
        raise ConfigError(path, "expected a number")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(parse_rational(x))
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None
    raise ConfigError(path, f"expected a number or 'p/q' string, got {x!r}")


def _matrix(m, path):
    if not isinstance(m, list) or not m or not all(isinstance(row, list) for row in m):
        raise ConfigError(path, "expected a non-empty list of rows")
    return np.array([[_number(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(m)])


def _literal(items, path, nvars=None):
    if not isinstance(items, list):
        raise ConfigError(path, "expected a list of {coeff, exps} monomials")
    try:
        return Polynomial.from_literal(items, nvars=nvars)
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None


def _potential(spec):
    """Return ``(phi, default_eta or None, label)``."""
    if isinstance(spec, str):
        try:
            phi, eta = builtin(spec)
        except UnknownBuiltin as exc:
            raise ConfigError("potential", exc.args[0]) from None
        return phi, eta, spec
    if not isinstance(spec, dict):
        raise ConfigError("potential", "expected a builtin name or an object")
    if "builtin" in spec:
        phi, eta, label = _potential(spec["builtin"])
        if "add" in spec:
            phi = phi + _literal(spec["add"], "potential.add", nvars=phi.nvars)
            label += "+literal"
        return phi, eta, label
    if "f" in spec:
        # an empty list is f = 0, read as a function of (u2, u3)
        f = _literal(spec["f"], "potential.f", nvars=None if spec["f"] else 2)
        try:
            return assemble_n3(f), antidiagonal(3), "assembled_n3"
        except ValueError as exc:
            raise ConfigError("potential.f", str(exc)) from None
    if "monomials" in spec:
        return _literal(spec["monomials"], "potential.monomials", nvars=spec.get("nvars")), None, "literal"
    raise ConfigError("potential", f"need one of 'builtin', 'f', 'monomials' or a name in {sorted(BUILTIN_F)}")


def _metric(spec, n, default):
    if spec is None:
        if default is None:
            raise ConfigError("metric", "required for literal potentials")
        return default
    if isinstance(spec, str):
        spec = {"name": spec}
    if isinstance(spec, list):
        spec = {"matrix": spec}
    if not isinstance(spec, dict):
        raise ConfigError("metric", "expected a name, a matrix or an object")
    if "matrix" in spec:
        eta = _matrix(spec["matrix"], "metric.matrix")
    else:
        name = spec.get("name")
        size = spec.get("N", n)
        if size != n:
            raise ConfigError("metric.N", f"metric size {size} but the potential has {n} variables")
        if name == "antidiagonal":
            eta = antidiagonal(n)
        elif name == "identity":
            eta = np.eye(n)
        else:
            raise ConfigError("metric.name", f"unknown metric {name!r}; use 'antidiagonal' or 'identity'")
    if eta.shape != (n, n):
        raise ConfigError("metric", f"metric must be {n}x{n}, got {eta.shape}")
    try:
        eta = symmetric(eta, "metric")
        inertia(eta)
    except ValueError as exc:
        raise ConfigError("metric", str(exc)) from None
    except Singular as exc:
        raise ConfigError("metric", f"degenerate: {exc}") from None
    return eta


def _int(x, path, lo):
    if isinstance(x, bool) or not isinstance(x, int) or x < lo:
        raise ConfigError(path, f"expected an integer >= {lo}, got {x!r}")
    return x


def _gram(raw, n):
    k = _int(raw.get("k", 1), "k", 1)
    p = _int(raw.get("p", 0), "p", 0)
    crs = _matrix(raw["crs"], "crs") if "crs" in raw else np.eye(k)
    if crs.shape != (k, k):
        raise ConfigError("crs", f"must be {k}x{k}, got {crs.shape[0]}x{crs.shape[1]}")
    ext = raw.get("mu_extension") or {}
    if not isinstance(ext, dict):
        raise ConfigError("mu_extension", "expected an object with 'cross' and/or 'corner'")
    cross = _matrix(ext["cross"], "mu_extension.cross") if "cross" in ext else None
    corner = _matrix(ext["corner"], "mu_extension.corner") if "corner" in ext else None
    if cross is not None and cross.shape != (k * n, p):
        raise ConfigError("mu_extension.cross", f"must be {k * n}x{p}")
    if corner is not None and corner.shape != (p, p):
        raise ConfigError("mu_extension.corner", f"must be {p}x{p}")
    try:
        return GramSpec(k, p, crs, cross, corner)
    except (ValueError, Singular) as exc:
        raise ConfigError("crs", str(exc)) from None


def _points(raw, n, seed):
    if "sample_points" in raw:
        pts = raw["sample_points"]
        if not isinstance(pts, list) or not pts:
            raise ConfigError("sample_points", "expected a non-empty list of points")
        arr = _matrix(pts, "sample_points")
        if arr.shape[1] != n:
            raise ConfigError("sample_points", f"points must have {n} coordinates")
        return arr
    count = _int(raw.get("sample_count", DEFAULT_SAMPLE_COUNT), "sample_count", 1)
    box = raw.get("sample_box", list(DEFAULT_SAMPLE_BOX))
    if not isinstance(box, list) or len(box) != 2:
        raise ConfigError("sample_box", "expected [lo, hi]")
    lo, hi = _number(box[0], "sample_box[0]"), _number(box[1], "sample_box[1]")
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, size=(count, n))


def _grid(raw, n):
    g = raw.get("grid")
    if g is None:
        return None
    if not isinstance(g, dict) or not {"min", "max", "steps"} <= set(g):
        raise ConfigError("grid", "expected an object with 'min', 'max', 'steps'")

    def vec(x, path):
        return [_number(v, f"{path}[{i}]") for i, v in enumerate(x)] if isinstance(x, list) else _number(x, path)

    steps = g["steps"]
    for i, s in enumerate(steps if isinstance(steps, list) else [steps]):
        _int(s, f"grid.steps[{i}]" if isinstance(steps, list) else "grid.steps", 1)
    try:
        grid = Grid.box(vec(g["min"], "grid.min"), vec(g["max"], "grid.max"), steps, n)
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from None
    if any(lo > hi for lo, hi in zip(grid.lo, grid.hi)):
        raise ConfigError("grid", "min exceeds max")
    return grid


def load_config(source, seed=None, thresholds=None) -> JobConfig:
    """Parse a config from a path, JSON string or dict; ``seed``/``thresholds`` override the file."""
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        try:
            raw = json.loads(Path(source).read_text())
        except OSError as exc:
            raise ConfigError("<file>", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    elif isinstance(source, str):
        raw = json.loads(source)
    else:
        raw = copy.deepcopy(source)
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if seed is not None:
        raw["seed"] = seed
    if thresholds:
        merged = dict(raw.get("thresholds", {}))
        merged.update(thresholds)
        raw["thresholds"] = merged

    if "potential" not in raw:
        raise ConfigError("potential", "missing")
    phi, default_eta, label = _potential(raw["potential"])
    n = phi.nvars
    eta = _metric(raw.get("metric"), n, default_eta)
    spec = _gram(raw, n)
    eff_seed = _int(raw.get("seed", 0), "seed", 0)
    points = _points(raw, n, eff_seed)
    grid = _grid(raw, n)
    integ = raw.get("integrator", {})
    if not isinstance(integ, dict):
        raise ConfigError("integrator", "expected an object")
    step = _number(integ.get("step", DEFAULT_STEP), "integrator.step")
    if not step > 0:
        raise ConfigError("integrator.step", "must be positive")
    base = raw.get("base_point")
    if base is not None:
        base = np.array([_number(x, f"base_point[{i}]") for i, x in enumerate(base)])
        if base.shape != (n,):
            raise ConfigError("base_point", f"must have {n} coordinates")
    th = raw.get("thresholds", {})
    if not isinstance(th, dict):
        raise ConfigError("thresholds", "expected an object")
    th = {name: _number(v, f"thresholds.{name}") for name, v in th.items()}
    return JobConfig(raw, phi, eta, spec, points, eff_seed, grid, step, base, th, label)
