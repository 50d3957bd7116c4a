"""Constructive realization: integrate the moving frame and the embedding.

Along a coordinate direction ``a`` the augmented state ``S = [F | r]`` obeys
the linear system ``dS/du^a = S @ K_a(u)`` with ``K_a = [[A_a, e_a], [0, 0]]``,
so ``dF/du^a = F A_a`` and ``dr/du^a = t_a``. It is integrated with the
classical fourth-order Runge-Kutta scheme along axis-aligned staircase paths.

The ambient space carries the constant metric ``G = blockdiag(eta, mu_lower)``
and the initial frame is the identity, so the frame Gram matrix
``F^T G F`` must stay equal to ``G``; its deviation ("drift") is monitored.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, GridTooCoarse, StepTooLarge
from .geometry import Connection, GramSpec, second_forms
from .linalg import block_diag, inertia, invert, symmetric
from .potential import third_tensor

DEFAULT_STEP = 0.01
DRIFT_LIMIT = 1e-4


@dataclass
class FrameState:
    u: np.ndarray
    r: np.ndarray
    frame: np.ndarray
    metric: np.ndarray
    n: int

    @property
    def tangents(self):
        return self.frame[:, :self.n]

    @property
    def normals(self):
        return self.frame[:, self.n:]

    def gram(self):
        return self.frame.T @ self.metric @ self.frame

    def drift(self) -> float:
        return float(np.max(np.abs(self.gram() - self.metric)))

    def copy(self):
        return FrameState(self.u.copy(), self.r.copy(), self.frame.copy(), self.metric, self.n)


def init_frame(eta, mu_lower, u0) -> FrameState:
    eta = symmetric(eta, "eta")
    mu_lower = symmetric(mu_lower, "mu")
    inertia(eta)
    inertia(mu_lower)
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (eta.shape[0],):
        raise DimensionMismatch("base point and metric dimensions disagree")
    metric = block_diag(eta, mu_lower)
    d = metric.shape[0]
    return FrameState(u0.copy(), np.zeros(d), np.eye(d), metric, eta.shape[0])


@dataclass(frozen=True)
class PathPlan:
    """Axis-aligned staircase from ``start`` to ``end`` visiting axes in ``order``."""

    start: tuple
    end: tuple
    order: tuple = None
    step: float = DEFAULT_STEP

    def __post_init__(self):
        start = tuple(float(x) for x in self.start)
        end = tuple(float(x) for x in self.end)
        if len(start) != len(end):
            raise DimensionMismatch("start and end have different dimensions")
        order = tuple(range(len(start))) if self.order is None else tuple(int(a) for a in self.order)
        if sorted(order) != list(range(len(start))):
            raise ValueError(f"order {order} is not a permutation of the axes")
        if not self.step > 0:
            raise ValueError("step must be positive")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "order", order)

    def waypoints(self):
        pts = [np.array(self.start)]
        for a in self.order:
            p = pts[-1].copy()
            p[a] = self.end[a]
            pts.append(p)
        return pts


def _augmented(a_mats, axis):
    n = a_mats.shape[-1]
    k = np.zeros((n + 1, n + 1))
    k[:n, :n] = a_mats[axis]
    k[axis, n] = 1.0
    return k


def _segment(connection_fn, state: FrameState, axis, target, h, drift_limit):
    dist = target - state.u[axis]
    if dist == 0.0:
        return state
    nsteps = max(1, math.ceil(abs(dist) / h - 1e-9))
    hs = dist / nsteps
    s = np.column_stack([state.frame, state.r])
    u = state.u.copy()
    x0 = u[axis]
    k_start = _augmented(connection_fn(u), axis)
    for step in range(nsteps):
        um = u.copy()
        um[axis] = x0 + (step + 0.5) * hs
        ue = u.copy()
        ue[axis] = x0 + (step + 1) * hs if step + 1 < nsteps else target
        k_mid = _augmented(connection_fn(um), axis)
        k_end = _augmented(connection_fn(ue), axis)
        k1 = s @ k_start
        k2 = (s + 0.5 * hs * k1) @ k_mid
        k3 = (s + 0.5 * hs * k2) @ k_mid
        k4 = (s + hs * k3) @ k_end
        s = s + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        u = ue
        k_start = k_end
        f = s[:, :-1]
        drift = float(np.max(np.abs(f.T @ state.metric @ f - state.metric)))
        if drift > drift_limit:
            raise StepTooLarge(f"frame Gram drift {drift:.3e} exceeds {drift_limit:g} at u={u.tolist()}",
                               point=u.tolist(), drift=drift)
    return FrameState(u, s[:, -1].copy(), s[:, :-1].copy(), state.metric, state.n)


def integrate_frame(connection_fn, plan: PathPlan, start: FrameState, drift_limit=DRIFT_LIMIT) -> FrameState:
    """Integrate a frame along ``plan`` for an arbitrary connection ``u -> A`` (shape ``(N, n, n)``)."""
    if not np.allclose(start.u, plan.start, rtol=0.0, atol=1e-14):
        raise ValueError(f"plan starts at {plan.start} but the frame is at {start.u.tolist()}")
    state = start
    for axis in plan.order:
        state = _segment(connection_fn, state, axis, plan.end[axis], plan.step, drift_limit)
    return state


def integrate_path(phi, eta, spec: GramSpec, plan: PathPlan, start: FrameState,
                   drift_limit=DRIFT_LIMIT, connection=None) -> FrameState:
    conn = connection or Connection(phi, eta, spec)
    if start.frame.shape != (conn.size, conn.size):
        raise DimensionMismatch("frame size does not match the Gram recipe")
    return integrate_frame(conn.matrices, plan, start, drift_limit)


def path_independence(phi, eta, spec: GramSpec, u0, u1, h=DEFAULT_STEP) -> float:
    """Max-abs difference of ``(r, frame)`` at ``u1`` between axis orders ``0..N-1`` and ``N-1..0``."""
    conn = Connection(phi, eta, spec)
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    if np.array_equal(u0, u1):
        raise ValueError("path endpoints coincide")
    start = init_frame(conn.eta, conn.mu_lower, u0)
    n = conn.n
    fwd = integrate_frame(conn.matrices, PathPlan(u0, u1, tuple(range(n)), h), start)
    rev = integrate_frame(conn.matrices, PathPlan(u0, u1, tuple(reversed(range(n))), h), start)
    return float(max(np.max(np.abs(fwd.r - rev.r)), np.max(np.abs(fwd.frame - rev.frame))))


def verify_first_form(state: FrameState, eta) -> float:
    """Max of ``|<t_i, t_j> - eta_ij|`` under the ambient metric."""
    t = state.tangents
    return float(np.max(np.abs(t.T @ state.metric @ t - np.asarray(eta, dtype=float))))


@dataclass(frozen=True)
class Grid:
    """Tensor grid ``linspace(lo[a], hi[a], steps[a])`` per axis."""

    lo: tuple
    hi: tuple
    steps: tuple

    @classmethod
    def box(cls, lo, hi, steps, n):
        def expand(x, cast):
            if np.ndim(x) == 0:
                return (cast(x),) * n
            if len(x) != n:
                raise DimensionMismatch(f"expected {n} entries, got {len(x)}")
            return tuple(cast(v) for v in x)
        return cls(expand(lo, float), expand(hi, float), expand(steps, int))

    @property
    def axes(self):
        return [np.linspace(a, b, s) for a, b, s in zip(self.lo, self.hi, self.steps)]

    def contains(self, u):
        return all(a <= x <= b for a, x, b in zip(self.lo, u, self.hi))


@dataclass
class GridRealization:
    """Realized samples on a tensor grid; arrays are indexed by node multi-index."""

    axes: list
    u: np.ndarray
    r: np.ndarray
    frames: np.ndarray
    metric: np.ndarray
    n: int
    max_drift: float

    def state(self, index) -> FrameState:
        index = tuple(index)
        return FrameState(self.u[index], self.r[index], self.frames[index], self.metric, self.n)

    def rows(self):
        """``(u, r)`` rows in C order of the node multi-index."""
        shape = self.u.shape[:-1]
        return self.u.reshape(-1, self.n), self.r.reshape(int(np.prod(shape)), -1)


def _walk(connection_fn, state, axis, nodes, h, drift_limit):
    """States at each node of ``nodes`` along ``axis``, walking outward from ``state``."""
    x0 = state.u[axis]
    out = {}
    above = [i for i in range(len(nodes)) if nodes[i] >= x0]
    below = [i for i in reversed(range(len(nodes))) if nodes[i] < x0]
    for side in (above, below):
        cur = state
        for i in side:
            cur = _segment(connection_fn, cur, axis, float(nodes[i]), h, drift_limit)
            out[i] = cur
    return out


def realize_grid(phi, eta, spec: GramSpec, grid: Grid, u0=None, h=DEFAULT_STEP,
                 drift_limit=DRIFT_LIMIT) -> GridRealization:
    """Realize the submanifold on every node of ``grid`` by a deterministic axis-ordered sweep.

    Starting from the identity frame at ``u0`` (default: origin), all nodes on
    the axis-0 line through ``u0`` are reached first, then from each of them the
    axis-1 lines, and so on.
    """
    conn = Connection(phi, eta, spec)
    n = conn.n
    u0 = np.zeros(n) if u0 is None else np.asarray(u0, dtype=float)
    if len(grid.steps) != n:
        raise DimensionMismatch("grid dimension differs from the potential")
    if not grid.contains(u0):
        raise ValueError(f"base point {u0.tolist()} lies outside the grid box")
    axes = grid.axes
    frontier = {(): init_frame(conn.eta, conn.mu_lower, u0)}
    for axis in range(n):
        nxt = {}
        for prefix in sorted(frontier):
            try:
                reached = _walk(conn.matrices, frontier[prefix], axis, axes[axis], h, drift_limit)
            except StepTooLarge as exc:
                raise StepTooLarge(f"{exc} (sweeping axis {axis} from node prefix {prefix})",
                                   point=exc.point, drift=exc.drift) from exc
            for i, st in reached.items():
                nxt[prefix + (i,)] = st
        frontier = nxt
    shape = tuple(grid.steps)
    d = conn.size
    u = np.zeros(shape + (n,))
    r = np.zeros(shape + (d,))
    frames = np.zeros(shape + (d, d))
    drift = 0.0
    for idx, st in frontier.items():
        u[idx] = [axes[a][i] for a, i in enumerate(idx)]
        r[idx] = st.r
        frames[idx] = st.frame
        drift = max(drift, st.drift())
    return GridRealization(axes, u, r, frames, conn.gram, n, drift)


def _interior(real: GridRealization):
    sizes = [len(a) for a in real.axes]
    if min(sizes) < 3:
        raise GridTooCoarse(f"need at least 3 nodes per axis, got {sizes}")
    return np.ndindex(*[s - 2 for s in sizes])


def _second_difference(real: GridRealization, idx):
    n = real.n
    dx = [a[1] - a[0] for a in real.axes]
    d2 = np.zeros((n, n, real.r.shape[-1]))

    def at(offset):
        return real.r[tuple(i + o for i, o in zip(idx, offset))]

    for i in range(n):
        e = [0] * n
        e[i] = 1
        plus, minus = tuple(e), tuple(-x for x in e)
        d2[i, i] = (at(plus) - 2.0 * real.r[idx] + at(minus)) / dx[i] ** 2
        for j in range(i + 1, n):
            f = [0] * n
            f[j] = 1

            def off(si, sj):
                return tuple(si * a + sj * b for a, b in zip(e, f))

            v = (at(off(1, 1)) - at(off(1, -1)) - at(off(-1, 1)) + at(off(-1, -1))) / (4.0 * dx[i] * dx[j])
            d2[i, j] = d2[j, i] = v
    return d2


@dataclass(frozen=True)
class SecondFormCheck:
    max_abs: float
    potential_part: float
    extra_part: float
    worst_point: tuple


def verify_second_forms(real: GridRealization, phi, spec: GramSpec) -> SecondFormCheck:
    """Compare ``<d^2 r / du^i du^j, n_alpha>`` (central differences) with the prescribed forms."""
    n = real.n
    kn = spec.k * n
    worst, pot, extra, where = 0.0, 0.0, 0.0, ()
    for inner in _interior(real):
        idx = tuple(i + 1 for i in inner)
        d2 = _second_difference(real, idx)
        normals = real.frames[idx][:, n:]
        measured = np.einsum("ijd,de,ea->aij", d2, real.metric, normals)
        expected = second_forms(third_tensor(phi, real.u[idx]), spec)
        dev = np.abs(measured - expected)
        pot = max(pot, float(np.max(dev[:kn])))
        if dev.shape[0] > kn:
            extra = max(extra, float(np.max(dev[kn:])))
        if float(np.max(dev)) > worst:
            worst, where = float(np.max(dev)), tuple(real.u[idx].tolist())
    return SecondFormCheck(worst, pot, extra, where)


def measured_weingarten(real: GridRealization, index) -> np.ndarray:
    """Shape operators ``c^k_{alpha i}`` from central differences of the normals at an interior node."""
    n = real.n
    idx = tuple(index)
    frame = real.frames[idx]
    tangents, metric = frame[:, :n], real.metric
    eta = tangents.T @ metric @ tangents
    eta_inv = invert(0.5 * (eta + eta.T))
    out = np.zeros((frame.shape[1] - n, n, n))
    for i in range(n):
        hi = list(idx)
        lo = list(idx)
        hi[i] += 1
        lo[i] -= 1
        dx = real.axes[i][1] - real.axes[i][0]
        dn = (real.frames[tuple(hi)][:, n:] - real.frames[tuple(lo)][:, n:]) / (2.0 * dx)
        # <d_i n_alpha, t_j> = c^k_{alpha i} eta_kj
        proj = np.einsum("da,de,ej->aj", dn, metric, tangents)
        out[:, :, i] = proj @ eta_inv
    return out


def diagonalizing_transform(metric) -> np.ndarray:
    """Matrix ``P`` with ``P^{-T} G P^{-1} = diag(+-1)``; map coordinates by ``z' = P z``.

    Positive directions come first. Eigenvector signs are fixed so that the
    largest-magnitude component is positive, which keeps exports reproducible.
    """
    vals, vecs = np.linalg.eigh(np.asarray(metric, dtype=float))
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    for j in range(vecs.shape[1]):
        if vecs[np.argmax(np.abs(vecs[:, j])), j] < 0:
            vecs[:, j] = -vecs[:, j]
    return np.sqrt(np.abs(vals))[:, None] * vecs.T
