"""Small dense symmetric-matrix helpers: validation, inversion, inertia.

Matrices here are at most a few dozen rows and well scaled, so singularity is
judged by a relative pivot test against the largest absolute entry.
"""

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import Singular

PIVOT_RTOL = 1e-12


class Inertia(NamedTuple):
    positive: int
    negative: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative


def symmetric(m, name="matrix") -> np.ndarray:
    """Return ``m`` as a float array after checking it is square and symmetric."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError(f"{name} is not symmetric")
    return a


def antidiagonal(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n))


def _scale(a):
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise Singular("zero matrix")
    return scale


def invert(m) -> np.ndarray:
    """Inverse of a symmetric matrix, symmetrized to remove rounding asymmetry.

    Raises
    ------
    Singular
        If an LU pivot falls below ``1e-12`` times the largest entry.
    """
    a = symmetric(m)
    scale = _scale(a)
    with warnings.catch_warnings():
        # an exactly zero pivot is reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < PIVOT_RTOL * scale:
        raise Singular(f"relative pivot {np.min(pivots) / scale:.3e} below {PIVOT_RTOL}")
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]))
    return 0.5 * (inv + inv.T)


def inertia(m) -> Inertia:
    """Count positive and negative directions by symmetric indefinite elimination.

    Uses a Bunch-Kaufman ``L D L^T`` factorization; each 1x1 pivot contributes
    its sign and each 2x2 pivot block contributes the signs of its two
    eigenvalues. By Sylvester's law of inertia these counts are those of ``m``.
    """
    a = symmetric(m)
    scale = _scale(a)
    _, d, _ = scipy.linalg.ldl(a, lower=True)
    n = a.shape[0]
    pos = neg = 0
    i = 0
    while i < n:
        if i + 1 < n and d[i + 1, i] != 0.0:
            block = d[i:i + 2, i:i + 2]
            vals = np.linalg.eigvalsh(0.5 * (block + block.T))
            i += 2
        else:
            vals = np.array([d[i, i]])
            i += 1
        if np.min(np.abs(vals)) < PIVOT_RTOL * scale:
            raise Singular("degenerate symmetric matrix")
        pos += int(np.sum(vals > 0))
        neg += int(np.sum(vals < 0))
    return Inertia(pos, neg)


def block_diag(*blocks) -> np.ndarray:
    return scipy.linalg.block_diag(*blocks)
