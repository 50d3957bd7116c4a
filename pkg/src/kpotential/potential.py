"""Exact multivariate polynomials with rational coefficients.

Potentials are stored exactly (``fractions.Fraction`` coefficients keyed by
exponent tuples) and differentiated symbolically; floats appear only when a
derivative is evaluated at a point. Variable indices are 0-based throughout,
so the physical coordinate ``u^1`` is index 0.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import BadVariableSupport, DimensionMismatch, UnknownBuiltin
from .linalg import antidiagonal

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or a Python int) into a Fraction.

    Decimal strings are rejected so that configs never smuggle in rounding.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"rational must be a 'p/q' string, got {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"not a decimal-free rational: {text!r}")
    num, den = m.group(1), m.group(2) or "1"
    if int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den))


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in ``nvars`` variables with exact rational coefficients.

    ``terms`` is a tuple of ``(exponents, coefficient)`` pairs sorted
    lexicographically by exponents with no zero coefficients, so two equal
    polynomials are structurally identical (and hash the same).
    """

    nvars: int
    terms: tuple = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        for exps, c in self.terms:
            if len(exps) != self.nvars:
                raise DimensionMismatch(f"exponent vector {exps} has wrong length")
            if c == 0:
                raise ValueError("zero coefficient stored")

    @classmethod
    def from_dict(cls, nvars, mapping):
        collected = {}
        for exps, c in mapping.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionMismatch(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            collected[exps] = collected.get(exps, Fraction(0)) + Fraction(c)
        terms = tuple(sorted((e, c) for e, c in collected.items() if c != 0))
        return cls(nvars, terms)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, ())

    @classmethod
    def monomial(cls, coeff, exps):
        return cls.from_dict(len(exps), {tuple(exps): Fraction(coeff)})

    @classmethod
    def from_literal(cls, items, nvars=None):
        """Build from the config format ``[{"coeff": "p/q", "exps": [...]}, ...]``."""
        mapping = {}
        for n, item in enumerate(items):
            try:
                exps = tuple(item["exps"])
                coeff = parse_rational(item["coeff"])
            except (KeyError, TypeError) as exc:
                raise ValueError(f"monomial {n}: expected keys 'coeff' and 'exps'") from exc
            if nvars is None:
                nvars = len(exps)
            if len(exps) != nvars:
                raise DimensionMismatch(f"monomial {n}: {len(exps)} exponents, expected {nvars}")
            mapping[exps] = mapping.get(exps, Fraction(0)) + coeff
        if nvars is None:
            raise ValueError("empty literal needs an explicit nvars")
        return cls.from_dict(nvars, mapping)

    def to_literal(self):
        return [{"coeff": format_rational(c), "exps": list(e)} for e, c in self.terms]

    def as_dict(self):
        return dict(self.terms)

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.from_dict(self.nvars, {(0,) * self.nvars: Fraction(other)})
        self._check(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, Fraction(0)) + c
        return Polynomial.from_dict(self.nvars, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            k = Fraction(other)
            return Polynomial.from_dict(self.nvars, {e: c * k for e, c in self.terms})
        self._check(other)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(self.nvars, d)

    __rmul__ = __mul__

    # structure --------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        return max((sum(e) for e, _ in self.terms), default=-1)

    def support(self):
        """Indices of variables that appear with a positive exponent."""
        return frozenset(i for e, _ in self.terms for i, k in enumerate(e) if k > 0)

    def drop_low_degree(self, max_degree=2):
        """Remove monomials of total degree <= ``max_degree``.

        Potentials that differ only by such terms have identical third
        derivatives, so this is the canonical form used for comparing them.
        """
        return Polynomial(self.nvars, tuple((e, c) for e, c in self.terms if sum(e) > max_degree))

    def partial(self, var):
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range for {self.nvars} variables")
        d = {}
        for e, c in self.terms:
            k = e[var]
            if k == 0:
                continue
            e2 = e[:var] + (k - 1,) + e[var + 1:]
            d[e2] = c * k
        return Polynomial.from_dict(self.nvars, d)

    def derivative(self, *vars):
        p = self
        for v in vars:
            p = p.partial(v)
        return p

    # evaluation -------------------------------------------------------------

    def evaluate_exact(self, point):
        point = [Fraction(x) for x in point]
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = Fraction(0)
        for e, c in self.terms:
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def __call__(self, point):
        u = np.asarray(point, dtype=float)
        if u.shape[-1] != self.nvars:
            raise DimensionMismatch(f"point has {u.shape[-1]} coordinates, expected {self.nvars}")
        if not self.terms:
            return np.zeros(u.shape[:-1]) if u.ndim > 1 else 0.0
        exps = np.array([e for e, _ in self.terms], dtype=float)
        coeffs = np.array([float(c) for _, c in self.terms])
        mono = np.prod(u[..., None, :] ** exps, axis=-1)
        out = mono @ coeffs
        return float(out) if u.ndim == 1 else out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "*".join(f"u{i + 1}^{k}" if k > 1 else f"u{i + 1}" for i, k in enumerate(e) if k)
            coeff = format_rational(c)
            parts.append(f"({coeff})*{mono}" if mono else f"({coeff})")
        return " + ".join(parts)


class DerivativeTable:
    """All order-``order`` partial derivatives of a polynomial, compiled for fast evaluation.

    The derivative polynomials are computed exactly once per distinct sorted
    index tuple; evaluation is a single matrix product over the union of
    their monomials and returns a fully symmetric array.
    """

    def __init__(self, poly: Polynomial, order: int):
        n = poly.nvars
        self.nvars = n
        self.order = order
        self.derivatives = {}
        monomials = {}
        for idx in combinations_with_replacement(range(n), order):
            d = poly.derivative(*idx)
            self.derivatives[idx] = d
            for e, _ in d.terms:
                monomials.setdefault(e, len(monomials))
        self.exps = np.array(sorted(monomials, key=monomials.get), dtype=float).reshape(len(monomials), n)
        flat = n ** order
        self.coeffs = np.zeros((flat, len(monomials)))
        for idx, d in self.derivatives.items():
            row = np.array([float(c) for _, c in d.terms])
            cols = [monomials[e] for e, _ in d.terms]
            for perm in set(permutations(idx)):
                self.coeffs[np.ravel_multi_index(perm, (n,) * order), cols] = row

    def __call__(self, point):
        u = np.asarray(point, dtype=float)
        if u.shape[-1] != self.nvars:
            raise DimensionMismatch(f"point has {u.shape[-1]} coordinates, expected {self.nvars}")
        shape = (self.nvars,) * self.order
        if self.exps.shape[0] == 0:
            return np.zeros(u.shape[:-1] + shape)
        mono = np.prod(u[..., None, :] ** self.exps, axis=-1)
        vals = mono @ self.coeffs.T
        return vals.reshape(u.shape[:-1] + shape)


@lru_cache(maxsize=256)
def derivative_table(poly: Polynomial, order: int) -> DerivativeTable:
    return DerivativeTable(poly, order)


def third_tensor(poly: Polynomial, u) -> np.ndarray:
    """``T[i, j, k] = d^3 poly / du^i du^j du^k`` at ``u`` (0-based indices).

    ``u`` may also be a stack of points with shape ``(..., N)``.
    """
    return derivative_table(poly, 3)(u)


def fourth_tensor(poly: Polynomial, u) -> np.ndarray:
    return derivative_table(poly, 4)(u)


# N = 3 family with antidiagonal metric and unit e_1 ------------------------

def lift_f(f: Polynomial) -> Polynomial:
    """Return ``f`` as a polynomial in ``(u1, u2, u3)`` depending only on ``u2, u3``.

    A two-variable ``f`` is read as a function of ``(u2, u3)``.
    """
    if f.nvars == 2:
        return Polynomial.from_dict(3, {(0,) + e: c for e, c in f.terms})
    if f.nvars != 3:
        raise DimensionMismatch(f"f must have 2 or 3 variables, got {f.nvars}")
    if 0 in f.support():
        raise BadVariableSupport("f must not depend on u1")
    return f


_PREFIX = Polynomial.from_dict(3, {(2, 0, 1): Fraction(1, 2), (1, 2, 0): Fraction(1, 2)})


def assemble_n3(f: Polynomial) -> Polynomial:
    """``Phi = (u1)^2 u3 / 2 + u1 (u2)^2 / 2 + f(u2, u3)``."""
    return _PREFIX + lift_f(f)


def extract_f(phi: Polynomial) -> Polynomial:
    """Inverse of :func:`assemble_n3`; raises BadVariableSupport if ``phi`` is not of that shape."""
    if phi.nvars != 3:
        raise DimensionMismatch("assembled potentials have 3 variables")
    return lift_f(phi - _PREFIX)


def _f(*terms):
    return Polynomial.from_dict(3, {(0, a, b): Fraction(c) for c, a, b in terms})


BUILTIN_F = {
    "trivial_n3": _f(),
    "quintic_n3": _f((Fraction(1, 4), 2, 2), (Fraction(1, 60), 0, 5)),
    "septic_n3": _f((Fraction(1, 6), 3, 1), (Fraction(1, 6), 2, 3), (Fraction(1, 210), 0, 7)),
    "deg11_n3": _f((Fraction(1, 6), 3, 2), (Fraction(1, 20), 2, 5), (Fraction(1, 3960), 0, 11)),
}


def builtin(name: str):
    """Return ``(Phi, eta)`` for one of the built-in N = 3 solutions."""
    try:
        f = BUILTIN_F[name]
    except KeyError:
        raise UnknownBuiltin(f"unknown builtin potential {name!r}; choose from {sorted(BUILTIN_F)}") from None
    return assemble_n3(f), antidiagonal(3)
