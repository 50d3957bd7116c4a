"""The N = 3 family ``Phi = (u1)^2 u3/2 + u1 (u2)^2/2 + f(u2, u3)``.

WDVV for this family reduces to one equation for ``f``,
``f_333 = (f_223)^2 - f_222 f_233``, equivalently to a first-order system for
``(a, b, c) = (f_222, f_223, f_233)``. All residuals are formed as exact
polynomials and evaluated at the point last, so genuine solutions give 0.0.

Points are ``(u2, u3)`` pairs.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch
from .linalg import antidiagonal
from .potential import Polynomial, assemble_n3, lift_f, third_tensor

U2, U3 = 1, 2


@dataclass(frozen=True)
class ABCFields:
    a: float
    b: float
    c: float

    def as_array(self):
        return np.array([self.a, self.b, self.c])


@lru_cache(maxsize=64)
def abc_polynomials(f: Polynomial):
    f = lift_f(f)
    return (f.derivative(U2, U2, U2), f.derivative(U2, U2, U3), f.derivative(U2, U3, U3))


@lru_cache(maxsize=64)
def eqf_polynomial(f: Polynomial) -> Polynomial:
    """``f_333 - f_223^2 + f_222 f_233`` as an exact polynomial."""
    a, b, c = abc_polynomials(f)
    return lift_f(f).derivative(U3, U3, U3) - b * b + a * c


@lru_cache(maxsize=64)
def shdt_polynomials(f: Polynomial):
    """Components of ``(a,b,c)_{u3} - M(a,b,c) (a,b,c)_{u2}`` with ``M = [[0,1,0],[0,0,1],[-c,2b,-a]]``."""
    a, b, c = abc_polynomials(f)
    r1 = a.partial(U3) - b.partial(U2)
    r2 = b.partial(U3) - c.partial(U2)
    r3 = c.partial(U3) - (-c * a.partial(U2) + 2 * b * b.partial(U2) - a * c.partial(U2))
    return r1, r2, r3


def _lift_point(point):
    p = np.asarray(point, dtype=float)
    if p.shape[-1] != 2:
        raise DimensionMismatch(f"expected (u2, u3) points, got shape {p.shape}")
    return np.concatenate([np.zeros(p.shape[:-1] + (1,)), p], axis=-1)


def abc_from_f(f, point) -> ABCFields:
    u = _lift_point(point)
    a, b, c = abc_polynomials(f)
    return ABCFields(float(a(u)), float(b(u)), float(c(u)))


def eqf_residual(f, point) -> float:
    return float(eqf_polynomial(f)(_lift_point(point)))


def shdt_residual(f, point) -> np.ndarray:
    u = _lift_point(point)
    return np.array([float(r(u)) for r in shdt_polynomials(f)])


def weingarten_n3(abc: ABCFields):
    """The three multiplication operators ``w_1, w_2, w_3`` of the N = 3 family."""
    a, b, c = abc.a, abc.b, abc.c
    w1 = np.eye(3)
    w2 = np.array([[0.0, b, c], [1.0, a, b], [0.0, 1.0, 0.0]])
    w3 = np.array([[0.0, c, b * b - a * c], [0.0, b, c], [1.0, 0.0, 0.0]])
    return w1, w2, w3


def operators_n3(f, point):
    """Multiplication operators ``(w_i)^k_j = eta^{ks} Phi_{sij}`` from the actual third derivatives.

    Unlike :func:`weingarten_n3`, whose ``w_3`` has the reduced equation
    built in, these commute only where ``f`` satisfies it.
    """
    u = _lift_point(point)
    t = third_tensor(assemble_n3(lift_f(f)), u)
    eta_inv = antidiagonal(3)
    return tuple(eta_inv @ t[i] for i in range(3))
