import numpy as np
import pytest
import sympy as sp
from hypothesis import settings

from kpotential.potential import Polynomial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

U = sp.symbols("u1:4")


def to_sympy(poly: Polynomial, syms=None):
    syms = syms or sp.symbols(f"u1:{poly.nvars + 1}")
    expr = sp.Integer(0)
    for exps, c in poly.terms:
        term = sp.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, exps):
            term *= s ** k
        expr += term
    return expr


def sympy_third(poly: Polynomial, point):
    """Third-derivative tensor by sympy differentiation and exact substitution."""
    syms = sp.symbols(f"u1:{poly.nvars + 1}")
    expr = to_sympy(poly, syms)
    n = poly.nvars
    subs = dict(zip(syms, [sp.nsimplify(x) for x in point]))
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j, k] = float(sp.diff(expr, syms[i], syms[j], syms[k]).subs(subs))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
