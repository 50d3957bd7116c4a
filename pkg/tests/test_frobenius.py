import itertools

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from conftest import to_sympy
from kpotential.errors import DimensionMismatch
from kpotential.frobenius import (StructureConstants, associativity_residual, associator,
                                  commutativity_residual, find_unit, frobenius_algebra,
                                  invariance_residual, multiply, structure_constants,
                                  wdvv_residual)
from kpotential.linalg import antidiagonal, invert
from kpotential.potential import BUILTIN_F, Polynomial, builtin, third_tensor

SOLUTIONS = sorted(BUILTIN_F)
ETA = antidiagonal(3)
points = st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3)


def perturbed_quintic():
    return builtin("quintic_n3")[0] + Polynomial.monomial(1, (0, 4, 0))


def symbolic_associator(phi):
    """Associator of the algebra built symbolically from ``phi``; every entry is a polynomial."""
    u = sp.symbols("u1:4")
    expr = to_sympy(phi, u)
    eta_inv = sp.Matrix(3, 3, lambda i, j: 1 if i + j == 2 else 0)
    c = [[[sum(eta_inv[k, s] * sp.diff(expr, u[s], u[i], u[j]) for s in range(3)) for j in range(3)]
          for i in range(3)] for k in range(3)]
    out = {}
    for i, j, k, m in itertools.product(range(3), repeat=4):
        left = sum(c[l][i][j] * c[m][l][k] for l in range(3))
        right = sum(c[l][j][k] * c[m][i][l] for l in range(3))
        out[i, j, k, m] = sp.expand(left - right)
    return u, out


@pytest.mark.parametrize("name", SOLUTIONS)
def test_builtins_are_symbolically_associative(name):
    _, assoc = symbolic_associator(builtin(name)[0])
    assert all(v == 0 for v in assoc.values())


def test_perturbation_breaks_associativity_symbolically():
    u, assoc = symbolic_associator(perturbed_quintic())
    at = {u[0]: 0, u[1]: 1, u[2]: 2}
    worst = max(abs(v.subs(at)) for v in assoc.values())
    assert worst >= 1
    # the bound |assoc| <= N max|eta^-1| |WDVV| ties the two residuals together
    assert worst <= 3 * wdvv_residual(perturbed_quintic(), ETA, (0, 1, 2)).max_abs + 1e-9


def test_wdvv_quintic_example():
    res = wdvv_residual(builtin("quintic_n3")[0], ETA, (0.3, 1.0, 2.0))
    assert res.max_abs <= 1e-10


def test_wdvv_quadratic_is_exactly_zero():
    phi = Polynomial.monomial(1, (1, 1, 0)) + Polynomial.monomial(3, (0, 0, 2))
    assert wdvv_residual(phi, np.diag([1.0, -1.0, 2.0]), (0.4, 0.5, 0.6)).max_abs == 0.0


def test_wdvv_perturbed_control():
    res = wdvv_residual(perturbed_quintic(), ETA, (0, 1, 2))
    assert res.max_abs >= 1
    assert len(res.indices) == 4


def test_wdvv_dimension_check():
    with pytest.raises(DimensionMismatch):
        wdvv_residual(builtin("quintic_n3")[0], ETA, (0, 1))


def test_zero_tensor_gives_zero_algebra():
    sc = structure_constants(np.eye(3), np.zeros((3, 3, 3)))
    assert not np.any(sc.c)
    assert invariance_residual(np.eye(3), sc) == 0.0
    assert find_unit(sc) is None


def test_quintic_structure_constants_slice():
    sc = frobenius_algebra(builtin("quintic_n3")[0], ETA, (0, 1, 2))
    np.testing.assert_allclose(sc.c[:, 1, :], [[0, 2, 1], [1, 0, 2], [0, 1, 0]])


@given(points)
def test_e1_is_the_unit(u):
    sc = frobenius_algebra(builtin("quintic_n3")[0], ETA, u)
    y = np.array([0.3, -1.1, 2.0])
    np.testing.assert_allclose(multiply(sc, [1, 0, 0], y), y, atol=1e-12)


def test_find_unit_examples():
    for name, u in [("quintic_n3", (0.2, 0.5, 1.3)), ("septic_n3", (0, 1, 1))]:
        sc = frobenius_algebra(builtin(name)[0], ETA, u)
        np.testing.assert_allclose(find_unit(sc), [1, 0, 0], atol=1e-12)


@given(points, st.floats(-3, 3), st.floats(-3, 3))
def test_multiply_is_bilinear_and_commutative(u, s, t):
    sc = frobenius_algebra(builtin("septic_n3")[0], ETA, u)
    x, y, z = np.eye(3)[0] + 0.5, np.array([0.1, -0.4, 0.9]), np.array([1.0, 2.0, -1.0])
    np.testing.assert_allclose(multiply(sc, x, y), multiply(sc, y, x), atol=1e-12)
    np.testing.assert_allclose(multiply(sc, s * x + t * z, y),
                               s * multiply(sc, x, y) + t * multiply(sc, z, y), atol=1e-9)
    assert not np.any(multiply(sc, np.zeros(3), y))


@pytest.mark.parametrize("name", SOLUTIONS)
def test_algebra_axioms_on_solutions(name, rng):
    phi = builtin(name)[0]
    for u in rng.uniform(-1, 1, (10, 3)):
        sc = frobenius_algebra(phi, ETA, u)
        assert commutativity_residual(sc) == 0.0
        assert invariance_residual(ETA, sc) <= 1e-12
        assert associativity_residual(sc) <= 1e-10


@given(points)
def test_associator_bounded_by_wdvv(u):
    phi = perturbed_quintic()
    sc = frobenius_algebra(phi, ETA, u)
    wd = wdvv_residual(phi, ETA, u).max_abs
    assert associativity_residual(sc) <= 3 * np.max(np.abs(invert(ETA))) * wd + 1e-9


def brute_invariance(eta, c):
    """Direct triple loop over basis vectors: max |<e_i o e_j, e_k> - <e_i, e_j o e_k>|."""
    n = c.shape[0]
    e = np.eye(n)
    worst = 0.0
    for i, j, k in itertools.product(range(n), repeat=3):
        ij = np.einsum("kab,a,b->k", c, e[i], e[j])
        jk = np.einsum("kab,a,b->k", c, e[j], e[k])
        worst = max(worst, abs(ij @ eta @ e[k] - e[i] @ eta @ jk))
    return worst


def test_invariance_hand_built_examples():
    eta = np.diag([1.0, -1.0])
    # a single constant c^k_ij with all indices equal is invariant by symmetry
    for idx in [(0, 0, 0), (1, 1, 1)]:
        c = np.zeros((2, 2, 2))
        c[idx] = 1.0
        sc = StructureConstants(c)
        assert invariance_residual(eta, sc) == brute_invariance(eta, c) == 0.0
    # e_2 o e_1 = e_1 and e_1 o e_1 = 0: <e2 o e1, e1> = 1 but <e2, e1 o e1> = 0
    c = np.zeros((2, 2, 2))
    c[0, 0, 1] = c[0, 1, 0] = 1.0
    assert invariance_residual(eta, StructureConstants(c)) == brute_invariance(eta, c) == 1.0


@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=8, max_size=8))
def test_invariance_matches_brute_force(vals):
    c = np.array(vals).reshape(2, 2, 2)
    eta = np.array([[0.0, 1.0], [1.0, 0.5]])
    assert invariance_residual(eta, StructureConstants(c)) == pytest.approx(brute_invariance(eta, c), abs=1e-12)


def test_associator_shape():
    sc = frobenius_algebra(builtin("quintic_n3")[0], ETA, (0.1, 0.2, 0.3))
    assert associator(sc).shape == (3, 3, 3, 3)


def test_structure_constants_from_tensor():
    t = third_tensor(builtin("deg11_n3")[0], (0.1, 0.9, -0.4))
    sc = structure_constants(ETA, t, (0.1, 0.9, -0.4))
    np.testing.assert_allclose(sc.c, np.einsum("ks,sij->kij", ETA, t), atol=1e-15)
    assert sc.basepoint.tolist() == [0.1, 0.9, -0.4]
