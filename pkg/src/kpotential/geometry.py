"""Flat torsionless k-potential submanifolds: second forms, Gauss/Ricci/Codazzi, connection.

Index conventions (all 0-based):

* tangent indices ``i, j, k, l`` run over ``range(N)``;
* normal indices ``alpha, beta`` run over ``range(L)`` with ``L = k*N + p``;
  normal ``s*N + m`` (copy ``s``) carries the second form ``Phi_{m..}`` and
  normals ``alpha >= k*N`` carry zero second forms;
* ``mu_upper`` is the contravariant Gram matrix ``mu^{alpha beta}`` built from
  the ansatz ``mu^{sN+m, tN+n} = c^{st} eta^{mn}``; the actual normal Gram
  matrix ``<n_alpha, n_beta>`` is its inverse ``mu_lower``.

The moving frame is the ``D x (N + L)`` matrix ``F = [t_1 .. t_N | n_1 .. n_L]``
and evolves by right multiplication, ``dF/du^i = F @ A_i``. With this
convention the connection is skew for ``G = blockdiag(eta, mu_lower)``,
``A_i^T G + G A_i = 0``, and the integrability condition is
``d_i A_j - d_j A_i + A_i A_j - A_j A_i = 0``.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DimensionMismatch, RangeError, Singular, SingularAssembly
from .frobenius import Residual
from .linalg import block_diag, inertia, invert, symmetric
from .potential import Polynomial, derivative_table, fourth_tensor, third_tensor


@dataclass(frozen=True)
class GramSpec:
    """Recipe for the normal-space Gram matrix of a k-potential submanifold.

    Parameters
    ----------
    k : int
        Number of copies of the potential's Hessian slices among the normals.
    p : int
        Number of extra normals with vanishing second forms.
    crs : array_like, shape (k, k)
        Nondegenerate symmetric matrix ``c^{rs}``.
    cross : array_like, shape (k*N, p), optional
        Entries ``mu^{alpha beta}`` with ``alpha < kN <= beta``. Default zero.
    corner : array_like, shape (p, p), optional
        Entries ``mu^{alpha beta}`` with both indices ``>= kN``. Default identity.
    """

    k: int = 1
    p: int = 0
    crs: np.ndarray = None
    cross: np.ndarray = None
    corner: np.ndarray = None

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.p, (int, np.integer)) or self.p < 0:
            raise ValueError(f"p must be a nonnegative integer, got {self.p!r}")
        crs = np.eye(self.k) if self.crs is None else symmetric(self.crs, "crs")
        if crs.shape != (self.k, self.k):
            raise DimensionMismatch(f"crs must be {self.k}x{self.k}, got {crs.shape}")
        try:
            inertia(crs)
        except Singular as exc:
            raise SingularAssembly("crs is degenerate") from exc
        object.__setattr__(self, "crs", crs)
        if self.cross is not None:
            object.__setattr__(self, "cross", np.array(self.cross, dtype=float))
        if self.corner is not None:
            object.__setattr__(self, "corner", symmetric(self.corner, "corner"))

    def normals(self, n):
        return self.k * n + self.p

    def ambient_dim(self, n):
        return (self.k + 1) * n + self.p


def gram_assemble(spec: GramSpec, eta) -> np.ndarray:
    """Assemble the contravariant Gram matrix ``mu^{alpha beta}`` (L x L)."""
    eta = symmetric(eta, "eta")
    n = eta.shape[0]
    kn, p = spec.k * n, spec.p
    mu = np.zeros((kn + p, kn + p))
    # adding 0.0 turns the -0.0 entries of the Kronecker product into 0.0
    mu[:kn, :kn] = np.kron(spec.crs, invert(eta)) + 0.0
    if p:
        cross = np.zeros((kn, p)) if spec.cross is None else spec.cross
        corner = np.eye(p) if spec.corner is None else spec.corner
        if cross.shape != (kn, p):
            raise DimensionMismatch(f"cross block must be {kn}x{p}, got {cross.shape}")
        if corner.shape != (p, p):
            raise DimensionMismatch(f"corner block must be {p}x{p}, got {corner.shape}")
        mu[:kn, kn:] = cross
        mu[kn:, :kn] = cross.T
        mu[kn:, kn:] = corner
    try:
        inertia(mu)
    except Singular as exc:
        raise SingularAssembly("assembled normal Gram matrix is degenerate") from exc
    return mu


def second_forms(t, spec: GramSpec) -> np.ndarray:
    """Second forms ``omega[alpha, i, j]``: k copies of the slices ``t[m]``, then p zeros.

    Works on stacked tensors too (leading axes are preserved).
    """
    t = np.asarray(t, dtype=float)
    n = t.shape[-1]
    extra = np.zeros(t.shape[:-3] + (spec.p, n, n))
    return np.concatenate([t] * spec.k + [extra], axis=-3)


@dataclass(frozen=True)
class Weingarten:
    """Weingarten operators ``shape[alpha][k, i] = -eta^{ks} omega_{alpha s i}``.

    ``frobenius`` is the sign-flipped family ``+eta^{-1} omega_alpha``; for
    ``alpha = s*N + m`` it is the multiplication-by-``e_m`` matrix of the
    Frobenius algebra.
    """

    shape: np.ndarray
    frobenius: np.ndarray


def weingarten(eta_inv, forms) -> Weingarten:
    eta_inv = np.asarray(eta_inv, dtype=float)
    forms = np.asarray(forms, dtype=float)
    if forms.shape[1:] != eta_inv.shape:
        raise DimensionMismatch("second forms and metric disagree")
    frob = np.einsum("ks,asi->aki", eta_inv, forms)
    return Weingarten(-frob, frob)


def gauss_tensor(forms, mu_upper) -> np.ndarray:
    """``G[i,j,k,l] = mu^{ab} (w_a[i,k] w_b[j,l] - w_a[i,l] w_b[j,k])``."""
    x = np.einsum("ab,aik,bjl->ijkl", mu_upper, forms, forms)
    return x - x.transpose(0, 1, 3, 2)


def ricci_tensor(forms, eta_inv) -> np.ndarray:
    """``R[a,b,k,l] = eta^{ij} (w_a[i,k] w_b[j,l] - w_a[i,l] w_b[j,k])``."""
    y = np.einsum("ij,aik,bjl->abkl", eta_inv, forms, forms)
    return y - y.transpose(0, 1, 3, 2)


def gauss_residual(forms, mu_upper) -> Residual:
    forms = np.asarray(forms, dtype=float)
    mu_upper = np.asarray(mu_upper, dtype=float)
    if mu_upper.shape != (forms.shape[0],) * 2:
        raise DimensionMismatch("Gram matrix and number of forms disagree")
    return Residual.of(gauss_tensor(forms, mu_upper))


def ricci_residual(forms, eta_inv) -> Residual:
    forms = np.asarray(forms, dtype=float)
    eta_inv = np.asarray(eta_inv, dtype=float)
    if eta_inv.shape != forms.shape[1:]:
        raise DimensionMismatch("metric and forms disagree")
    return Residual.of(ricci_tensor(forms, eta_inv))


def potential_gauss_tensor(t, eta_inv) -> np.ndarray:
    """``V[i,j,k,l] = eta^{mn} (T_mik T_njl - T_mil T_njk)``, laid out like :func:`gauss_tensor`."""
    x = np.einsum("mik,mn,njl->ijkl", t, eta_inv, t)
    return x - x.transpose(0, 1, 3, 2)


@dataclass(frozen=True)
class GaussRicciCheck:
    passed: bool
    gauss: Residual
    ricci: Residual
    identity_defect: float
    crs_sum: float


def gauss_from_ricci_check(phi, eta, spec: GramSpec, u, tol=1e-12) -> GaussRicciCheck:
    """Check that under the Gram ansatz the Gauss tensor is ``sum(c^{rs})`` times a Ricci-type tensor.

    The Gauss side is assembled from the full Gram matrix and second forms;
    the prediction is computed directly from the third derivatives of ``phi``.
    The identity is algebraic, so it holds whether or not ``phi`` solves WDVV.
    """
    eta = symmetric(eta, "eta")
    eta_inv = invert(eta)
    t = third_tensor(phi, u)
    forms = second_forms(t, spec)
    mu_upper = gram_assemble(spec, eta)
    g = gauss_tensor(forms, mu_upper)
    v = potential_gauss_tensor(t, eta_inv)
    total = float(np.sum(spec.crs))
    defect = float(np.max(np.abs(g - total * v)))
    bound = np.sum(np.abs(spec.crs)) * np.abs(v) + tol
    passed = defect <= tol and bool(np.all(np.abs(g) <= bound))
    return GaussRicciCheck(passed, Residual.of(g), Residual.of(ricci_tensor(forms, eta_inv)), defect, total)


def codazzi_defect(forms, points) -> float:
    """Max of ``|d_k w_a[i,j] - d_j w_a[i,k]|`` for forms given as nested lists of polynomials.

    Returns exactly 0.0 when every difference is the zero polynomial.
    """
    diffs = []
    for form in forms:
        n = len(form)
        for i, j, k in product(range(n), repeat=3):
            d = form[i][j].partial(k) - form[i][k].partial(j)
            if not d.is_zero():
                diffs.append(d)
    if not diffs:
        return 0.0
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return float(max(np.max(np.abs(d(pts))) for d in diffs))


def hessian_forms(phi: Polynomial):
    """Second forms ``Phi_{m i j}`` of a potential as polynomials, ``[m][i][j]``."""
    table = derivative_table(phi, 3).derivatives
    n = phi.nvars
    return [[[table[tuple(sorted((m, i, j)))] for j in range(n)] for i in range(n)] for m in range(n)]


def codazzi_check(phi, points) -> float:
    return codazzi_defect(hessian_forms(phi), points)


class Connection:
    """Connection matrices of the realization system for a potential and Gram recipe.

    ``matrices(u)`` returns ``A`` with shape ``(N, N+L, N+L)``; column ``j`` of
    ``A[i]`` expresses ``d t_j / du^i`` and column ``N + alpha`` expresses
    ``d n_alpha / du^i`` in the frame basis.
    """

    def __init__(self, phi: Polynomial, eta, spec: GramSpec):
        self.phi = phi
        self.eta = symmetric(eta, "eta")
        self.n = self.eta.shape[0]
        if phi.nvars != self.n:
            raise DimensionMismatch(f"potential has {phi.nvars} variables, metric is {self.n}x{self.n}")
        self.spec = spec
        self.eta_inv = invert(self.eta)
        self.mu_upper = gram_assemble(spec, self.eta)
        self.mu_lower = invert(self.mu_upper)
        self.L = self.mu_upper.shape[0]
        self.size = self.n + self.L
        self.gram = block_diag(self.eta, self.mu_lower)

    def forms(self, u):
        return second_forms(third_tensor(self.phi, u), self.spec)

    def from_forms(self, forms) -> np.ndarray:
        n = self.n
        a = np.zeros((n, self.size, self.size))
        a[:, n:, :n] = np.einsum("bg,gij->ibj", self.mu_upper, forms)
        a[:, :n, n:] = -np.einsum("ks,asi->ika", self.eta_inv, forms)
        return a

    def matrices(self, u) -> np.ndarray:
        return self.from_forms(self.forms(u))

    def derivatives(self, u) -> np.ndarray:
        """``dA[l, i] = d A_i / d u^l`` from exact fourth derivatives."""
        q = fourth_tensor(self.phi, u)
        return np.stack([self.from_forms(second_forms(q[..., l], self.spec)) for l in range(self.n)])

    def skewness(self, u) -> float:
        a = self.matrices(u)
        g = self.gram
        return float(np.max(np.abs(np.transpose(a, (0, 2, 1)) @ g + g @ a)))

    def curvature(self, u) -> np.ndarray:
        """``F[i, j] = d_i A_j - d_j A_i + A_i A_j - A_j A_i``."""
        a = self.matrices(u)
        da = self.derivatives(u)
        prod_ = np.einsum("iab,jbc->ijac", a, a)
        return da - da.transpose(1, 0, 2, 3) + prod_ - prod_.transpose(1, 0, 2, 3)


def connection_matrices(phi, eta, spec: GramSpec, u) -> np.ndarray:
    return Connection(phi, eta, spec).matrices(u)


def curvature_residual(phi, eta, spec: GramSpec, u) -> Residual:
    return Residual.of(Connection(phi, eta, spec).curvature(u))


@dataclass(frozen=True)
class SpectralProblem:
    """First-order form of the linear problem with parameters ``lam`` and ``rho``.

    The unknown is the column ``psi = (da/du^1 .. da/du^N, b_1 .. b_L)`` and
    ``d psi / du^i = matrices[i] @ psi``; ``curvature[i, j]`` is
    ``d_i M_j - d_j M_i + M_j M_i - M_i M_j``.
    """

    lam: float
    rho: float
    matrices: np.ndarray
    curvature: np.ndarray
    residual: Residual = field(default=None)


def _spectral_from_forms(conn: Connection, forms, lam, rho):
    n = conn.n
    m = np.zeros((n, conn.size, conn.size))
    m[:, :n, n:] = lam * np.einsum("ab,aij->ijb", conn.mu_upper, forms)
    m[:, n:, :n] = rho * np.einsum("kj,aij->iak", conn.eta_inv, forms)
    return m


def spectral_problem(phi, eta, spec: GramSpec, lam, rho, u) -> SpectralProblem:
    conn = Connection(phi, eta, spec)
    m = _spectral_from_forms(conn, conn.forms(u), lam, rho)
    q = fourth_tensor(phi, u)
    dm = np.stack([_spectral_from_forms(conn, second_forms(q[..., l], spec), lam, rho) for l in range(conn.n)])
    prod_ = np.einsum("jab,ibc->ijac", m, m)
    f = dm - dm.transpose(1, 0, 2, 3) + prod_ - prod_.transpose(1, 0, 2, 3)
    return SpectralProblem(float(lam), float(rho), m, f, Residual.of(f))


def admissible_signatures(n, s, k, p) -> frozenset:
    """Ambient signatures ``(2s - N)(2r - k + 1) + 2t - p`` for ``0 <= r <= k``, ``0 <= t <= p``."""
    if n < 1 or k < 1 or p < 0:
        raise RangeError("need N >= 1, k >= 1, p >= 0")
    if not 0 <= s <= n:
        raise RangeError(f"positive index s={s} outside [0, {n}]")
    sig = 2 * s - n
    return frozenset(sig * (2 * r - k + 1) + 2 * t - p for r in range(k + 1) for t in range(p + 1))


def ambient_signature(eta, mu_lower) -> int:
    return inertia(block_diag(eta, mu_lower)).signature
