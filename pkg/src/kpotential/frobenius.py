"""Frobenius algebras built from a flat metric and a potential.

At a point ``u`` the structure constants are ``c^k_ij = eta^{ks} Phi_{sij}``.
The algebra is always commutative and eta-invariant; it is associative exactly
when the WDVV equations hold at ``u``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import invert, symmetric
from .potential import third_tensor


@dataclass(frozen=True)
class StructureConstants:
    """``c[k, i, j]`` is the coefficient of ``e_k`` in ``e_i o e_j`` at ``basepoint``."""

    c: np.ndarray
    basepoint: np.ndarray = None

    @property
    def n(self):
        return self.c.shape[0]


def structure_constants(eta_inv, t, basepoint=None) -> StructureConstants:
    eta_inv = np.asarray(eta_inv, dtype=float)
    t = np.asarray(t, dtype=float)
    n = t.shape[0]
    if t.shape != (n, n, n) or eta_inv.shape != (n, n):
        raise DimensionMismatch(f"metric {eta_inv.shape} and tensor {t.shape} disagree")
    c = np.einsum("ks,sij->kij", eta_inv, t)
    # t is symmetric, so symmetrizing only removes summation-order noise
    c = 0.5 * (c + c.transpose(0, 2, 1))
    bp = None if basepoint is None else np.asarray(basepoint, dtype=float)
    return StructureConstants(c, bp)


def frobenius_algebra(phi, eta, u) -> StructureConstants:
    return structure_constants(invert(eta), third_tensor(phi, u), u)


def wdvv_tensor(t, eta_inv) -> np.ndarray:
    """``R[i, j, m, n] = T_ijk eta^kl T_lmn - T_imk eta^kl T_ljn``."""
    x = np.einsum("ijk,kl,lmn->ijmn", t, eta_inv, t)
    return x - x.transpose(0, 2, 1, 3)


@dataclass(frozen=True)
class Residual:
    """Max-abs of a residual tensor and where it was attained."""

    max_abs: float
    indices: tuple = ()
    value: float = 0.0

    @classmethod
    def of(cls, tensor):
        tensor = np.asarray(tensor)
        if tensor.size == 0:
            return cls(0.0)
        flat = int(np.argmax(np.abs(tensor)))
        idx = np.unravel_index(flat, tensor.shape)
        v = float(tensor[idx])
        return cls(abs(v), tuple(int(i) for i in idx), v)

    def __float__(self):
        return self.max_abs


def wdvv_residual(phi, eta, u) -> Residual:
    """Max-abs WDVV defect of ``phi`` at ``u`` with the attaining ``(i, j, m, n)``."""
    eta = symmetric(eta, "eta")
    u = np.asarray(u, dtype=float)
    if u.shape != (phi.nvars,) or eta.shape != (phi.nvars, phi.nvars):
        raise DimensionMismatch("potential, metric and point dimensions disagree")
    return Residual.of(wdvv_tensor(third_tensor(phi, u), invert(eta)))


def multiply(sc: StructureConstants, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (sc.n,) or y.shape != (sc.n,):
        raise DimensionMismatch(f"vectors must have length {sc.n}")
    return np.einsum("kij,i,j->k", sc.c, x, y)


def associator(sc: StructureConstants) -> np.ndarray:
    """``A[i, j, k] = (e_i o e_j) o e_k - e_i o (e_j o e_k)`` as vectors (last axis)."""
    c = sc.c
    left = np.einsum("lij,mlk->ijkm", c, c)
    right = np.einsum("ljk,mil->ijkm", c, c)
    return left - right


def associativity_residual(sc: StructureConstants) -> float:
    return float(np.max(np.abs(associator(sc)), initial=0.0))


def invariance_residual(eta, sc: StructureConstants) -> float:
    """Max over basis triples of ``|<e_i o e_j, e_k> - <e_i, e_j o e_k>|``."""
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (sc.n, sc.n):
        raise DimensionMismatch("metric and structure constants disagree")
    lhs = np.einsum("kl,lij->ijk", eta, sc.c)
    rhs = np.einsum("il,ljk->ijk", eta, sc.c)
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def commutativity_residual(sc: StructureConstants) -> float:
    return float(np.max(np.abs(sc.c - sc.c.transpose(0, 2, 1)), initial=0.0))


UNIT_TOL = 1e-8


def find_unit(sc: StructureConstants, tol=UNIT_TOL):
    """Least-squares solve ``c^k_ij e^j = delta^k_i``; return ``e`` or None.

    ``e`` is returned only if the linear-system residual is at most ``tol``.
    """
    n = sc.n
    # rows indexed by (k, i), columns by j
    a = sc.c.reshape(n * n, n)
    b = np.eye(n).reshape(n * n)
    e, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.max(np.abs(a @ e - b)) > tol:
        return None
    return e
