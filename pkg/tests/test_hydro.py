from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from kpotential.errors import BadVariableSupport, DimensionMismatch
from kpotential.geometry import GramSpec, second_forms, weingarten
from kpotential.hydro import (ABCFields, abc_from_f, eqf_polynomial, eqf_residual, operators_n3,
                              shdt_residual, weingarten_n3)
from kpotential.linalg import antidiagonal
from kpotential.potential import BUILTIN_F, Polynomial, assemble_n3, third_tensor

SOLUTIONS = ["quintic_n3", "septic_n3", "deg11_n3"]
x, y = sp.symbols("x y")  # (u2, u3)


def f2(*terms):
    return Polynomial.from_dict(2, {(a, b): Fraction(c) for c, a, b in terms})


CONTROL = f2((1, 3, 1))  # (u2)^3 u3


def sympy_f(f):
    return sum(sp.Rational(c.numerator, c.denominator) * x ** e[-2] * y ** e[-1] for e, c in f.terms)


def sympy_residuals(f, point):
    """Reduced equation and hydrodynamic system evaluated symbolically."""
    g = sympy_f(f)
    a, b, c = sp.diff(g, x, 3), sp.diff(g, x, x, y), sp.diff(g, x, y, y)
    eqf = sp.diff(g, y, 3) - b ** 2 + a * c
    m = sp.Matrix([[0, 1, 0], [0, 0, 1], [-c, 2 * b, -a]])
    v = sp.Matrix([a, b, c])
    shdt = v.diff(y) - m * v.diff(x)
    at = {x: point[0], y: point[1]}
    return eqf.subs(at), [e.subs(at) for e in shdt]


def test_abc_examples():
    assert abc_from_f(BUILTIN_F["quintic_n3"], (1, 2)) == ABCFields(0, 2, 1)
    assert abc_from_f(BUILTIN_F["septic_n3"], (1, 1)) == ABCFields(1, 2, 2)
    assert abc_from_f(Polynomial.zero(2), (0.3, 0.4)) == ABCFields(0, 0, 0)


def test_rejects_u1_and_bad_points():
    with pytest.raises(BadVariableSupport):
        eqf_residual(Polynomial.monomial(1, (1, 1, 0)), (1, 1))
    with pytest.raises(DimensionMismatch):
        abc_from_f(BUILTIN_F["quintic_n3"], (0, 1, 2))


def test_control_values_against_sympy():
    eqf, shdt = sympy_residuals(CONTROL, (1, 1))
    assert eqf == -36
    assert eqf_residual(CONTROL, (1, 1)) == -36.0
    assert list(shdt_residual(CONTROL, (1, 1))) == [float(v) for v in shdt] == [0.0, 0.0, -72.0]


def test_deg11_spot_value():
    # both sides of the reduced equation equal 13/4 at (1, 1)
    f = BUILTIN_F["deg11_n3"]
    assert float(f.derivative(2, 2, 2).evaluate_exact((0, 1, 1))) == 3.25
    assert eqf_residual(f, (1, 1)) == 0.0


@pytest.mark.parametrize("name", SOLUTIONS + ["trivial_n3"])
def test_solutions_have_zero_residuals(name, rng):
    f = BUILTIN_F[name]
    for p in rng.uniform(-1, 1, (100, 2)):
        assert abs(eqf_residual(f, p)) <= 1e-13
        assert np.max(np.abs(shdt_residual(f, p))) <= 1e-13
    assert eqf_polynomial(f).is_zero()


coeffs = st.fractions(-3, 3, max_denominator=4)
fs = st.lists(st.tuples(coeffs, st.integers(0, 6), st.integers(0, 6)), max_size=4).map(lambda t: f2(*t))


@given(fs, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_hydrodynamic_system_tracks_reduced_equation(f, point):
    # the first two rows are compatibility identities; the third is d/du2 of the defect
    r = shdt_residual(f, point)
    assert r[0] == 0.0 and r[1] == 0.0
    assert r[2] == pytest.approx(float(eqf_polynomial(f).partial(1).evaluate_exact((0,) + point)), abs=1e-9)
    eqf, shdt = sympy_residuals(f, point)
    assert eqf_residual(f, point) == pytest.approx(float(eqf), abs=1e-9)
    np.testing.assert_allclose(r, [float(v) for v in shdt], atol=1e-9)


def test_weingarten_displayed_values():
    w1, w2, w3 = weingarten_n3(abc_from_f(BUILTIN_F["quintic_n3"], (1, 2)))
    np.testing.assert_array_equal(w1, np.eye(3))
    np.testing.assert_array_equal(w2, [[0, 2, 1], [1, 0, 2], [0, 1, 0]])
    np.testing.assert_array_equal(w3, [[0, 1, 4], [0, 2, 1], [1, 0, 0]])


def test_weingarten_zero_fields():
    _, w2, w3 = weingarten_n3(ABCFields(0, 0, 0))
    np.testing.assert_array_equal(w2, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    np.testing.assert_array_equal(w3, [[0, 0, 0], [0, 0, 0], [1, 0, 0]])


@pytest.mark.parametrize("name", SOLUTIONS)
def test_weingarten_agrees_with_geometry(name, rng):
    f = BUILTIN_F[name]
    for p in rng.uniform(-1, 1, (10, 2)):
        t = third_tensor(assemble_n3(f), (0.0, *p))
        frob = weingarten(antidiagonal(3), second_forms(t, GramSpec())).frobenius
        for mine, theirs in zip(weingarten_n3(abc_from_f(f, p)), frob):
            np.testing.assert_allclose(mine, theirs, atol=1e-12)


def commutator(a, b):
    return np.max(np.abs(a @ b - b @ a))


@pytest.mark.parametrize("name", SOLUTIONS)
def test_operators_commute_on_solutions(name, rng):
    f = BUILTIN_F[name]
    for p in rng.uniform(-1, 1, (20, 2)):
        w = weingarten_n3(abc_from_f(f, p))
        ops = operators_n3(f, p)
        for i in range(3):
            for j in range(3):
                assert commutator(w[i], w[j]) <= 1e-12
                assert commutator(ops[i], ops[j]) <= 1e-12


def test_perturbed_operators_do_not_commute():
    f = BUILTIN_F["quintic_n3"] + Polynomial.monomial(1, (0, 4, 0))
    ops = operators_n3(f, (1, 2))
    # only w_3 sees the perturbed f_333, so the defect equals the reduced-equation defect
    assert commutator(ops[1], ops[2]) == pytest.approx(abs(eqf_residual(f, (1, 2))))
    assert commutator(ops[1], ops[2]) >= 1
