import numpy as np
import pytest
from hypothesis import given, strategies as st

from kpotential.errors import DimensionMismatch, GridTooCoarse, Singular, StepTooLarge
from kpotential.geometry import Connection, GramSpec, second_forms, weingarten
from kpotential.linalg import antidiagonal, inertia
from kpotential.potential import Polynomial, builtin, third_tensor
from kpotential.realization import (FrameState, Grid, PathPlan, diagonalizing_transform, init_frame,
                                    integrate_frame, integrate_path, measured_weingarten,
                                    path_independence, realize_grid, verify_first_form,
                                    verify_second_forms)

ETA = antidiagonal(3)
ORIGIN = np.zeros(3)
CORNER = np.array([0.2, 0.2, 0.2])


def quintic():
    return builtin("quintic_n3")[0]


def perturbed():
    return quintic() + Polynomial.monomial(1, (0, 4, 0))


def start(phi, spec, u0=ORIGIN):
    conn = Connection(phi, ETA, spec)
    return init_frame(ETA, conn.mu_lower, u0)


# -- frames ------------------------------------------------------------------------

def test_init_frame_is_exact():
    st_ = start(quintic(), GramSpec(2, 1, np.diag([1.0, -1.0])))
    assert st_.frame.shape == (10, 10)
    assert st_.drift() == 0.0
    assert verify_first_form(st_, ETA) == 0.0


def test_init_frame_rejects_degenerate_gram():
    with pytest.raises(Singular):
        init_frame(ETA, np.zeros((3, 3)), ORIGIN)
    with pytest.raises(DimensionMismatch):
        init_frame(ETA, ETA, (0.0, 0.0))


def test_path_plan_validation():
    assert [p.tolist() for p in PathPlan((0, 0), (1, 2), (1, 0)).waypoints()] == [[0, 0], [0, 2], [1, 2]]
    with pytest.raises(ValueError):
        PathPlan((0, 0), (1, 1), (0, 0))
    with pytest.raises(ValueError):
        PathPlan((0, 0), (1, 1), step=0.0)
    with pytest.raises(ValueError):
        integrate_path(quintic(), ETA, GramSpec(), PathPlan((1, 0, 0), CORNER), start(quintic(), GramSpec()))


@given(st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3))
def test_zero_potential_moves_along_initial_tangents(u1):
    phi = Polynomial.zero(3)
    s0 = start(phi, GramSpec(1, 1))
    end = integrate_path(phi, ETA, GramSpec(1, 1), PathPlan(ORIGIN, u1), s0)
    np.testing.assert_allclose(end.r, s0.tangents @ np.array(u1), atol=1e-13)
    np.testing.assert_array_equal(end.frame, s0.frame)


def test_quintic_path_acceptance_values():
    spec = GramSpec(1, 0, [[1.0]])
    end = integrate_path(quintic(), ETA, spec, PathPlan(ORIGIN, CORNER, step=0.01), start(quintic(), spec))
    assert end.drift() <= 1e-8
    assert verify_first_form(end, ETA) <= 1e-8
    assert path_independence(quintic(), ETA, spec, ORIGIN, CORNER, 0.01) <= 1e-6


def test_integrator_order():
    phi = builtin("deg11_n3")[0]
    spec = GramSpec()
    u1 = np.full(3, 0.8)
    drift, loop = [], []
    for h in (0.1, 0.05, 0.025):
        end = integrate_path(phi, ETA, spec, PathPlan(ORIGIN, u1, step=h), start(phi, spec))
        drift.append(end.drift())
        loop.append(path_independence(phi, ETA, spec, ORIGIN, u1, h))
    for seq in (drift, loop):
        assert seq[0] / seq[1] >= 8 and seq[1] / seq[2] >= 8


def test_perturbed_path_dependence():
    assert path_independence(perturbed(), ETA, GramSpec(), ORIGIN, CORNER, 0.01) >= 1e-3


def test_path_independence_edge_cases():
    assert path_independence(Polynomial.zero(3), ETA, GramSpec(), ORIGIN, CORNER) == 0.0
    with pytest.raises(ValueError):
        path_independence(quintic(), ETA, GramSpec(), CORNER, CORNER)


def test_step_too_large_reports_location():
    phi = builtin("deg11_n3")[0]
    with pytest.raises(StepTooLarge) as info:
        path_independence(phi, ETA, GramSpec(), ORIGIN, np.full(3, 0.8), 0.2)
    assert info.value.drift > 1e-4
    assert len(info.value.point) == 3


def test_broken_connection_drifts_linearly():
    # a constant symmetric (so not skew) generator violates isometry
    eps = 1e-3
    bad = np.zeros((2, 4, 4))
    bad[0, 0, 1] = bad[0, 1, 0] = eps
    s0 = FrameState(np.zeros(2), np.zeros(4), np.eye(4), np.eye(4), 2)
    devs = []
    for length in (0.5, 1.0, 2.0):
        end = integrate_frame(lambda u: bad, PathPlan((0, 0), (length, 0), step=0.05), s0, drift_limit=1.0)
        devs.append(verify_first_form(end, np.eye(2)))
    assert devs[1] / devs[0] == pytest.approx(2, rel=1e-2)
    assert devs[2] / devs[1] == pytest.approx(2, rel=1e-2)


# -- grids -------------------------------------------------------------------------

def grid5(lo=-0.2, hi=0.2):
    return Grid.box(lo, hi, 5, 3)


def test_zero_potential_grid_is_affine_plane():
    real = realize_grid(Polynomial.zero(3), ETA, GramSpec(1, 1), grid5())
    _, r = real.rows()
    sv = np.linalg.svd(r - r.mean(axis=0), compute_uv=False)
    assert int(np.sum(sv > 1e-9 * sv[0])) == 3
    assert verify_second_forms(real, Polynomial.zero(3), GramSpec(1, 1)).max_abs <= 1e-12


def test_quintic_grid_verifications():
    spec = GramSpec()
    real = realize_grid(quintic(), ETA, spec, grid5(), h=0.01)
    assert real.r.shape == (5, 5, 5, 6)
    assert real.max_drift <= 1e-8
    worst = max(verify_first_form(real.state(i), ETA) for i in np.ndindex(5, 5, 5))
    assert worst <= 1e-8
    assert verify_second_forms(real, quintic(), spec).max_abs <= 5e-3


def test_grid_is_deterministic():
    a = realize_grid(quintic(), ETA, GramSpec(1, 1), grid5(), u0=(0.1, 0.0, -0.1))
    b = realize_grid(quintic(), ETA, GramSpec(1, 1), grid5(), u0=(0.1, 0.0, -0.1))
    assert np.array_equal(a.r, b.r) and np.array_equal(a.frames, b.frames)


def test_grid_must_contain_base_point():
    with pytest.raises(ValueError):
        realize_grid(quintic(), ETA, GramSpec(), grid5(0.1, 0.2))


def test_grid_too_coarse():
    real = realize_grid(quintic(), ETA, GramSpec(), Grid.box(-0.1, 0.1, [3, 2, 3], 3))
    with pytest.raises(GridTooCoarse):
        verify_second_forms(real, quintic(), GramSpec())


def test_second_forms_converge_quadratically_and_extras_vanish():
    spec = GramSpec(1, 1)
    coarse = verify_second_forms(realize_grid(quintic(), ETA, spec, grid5(-0.2, 0.2), h=0.005), quintic(), spec)
    fine = verify_second_forms(realize_grid(quintic(), ETA, spec, grid5(-0.1, 0.1), h=0.005), quintic(), spec)
    assert fine.max_abs <= 5e-3
    assert coarse.extra_part <= 1e-10 and fine.extra_part <= 1e-10
    # central differences: halving the grid step should cut the error by about 4
    assert 3.0 <= coarse.potential_part / fine.potential_part <= 5.0


def test_measured_weingarten_matches_shape_operators():
    spec = GramSpec(2, 0, [[2.0, 0.0], [0.0, -1.0]])
    real = realize_grid(builtin("septic_n3")[0], ETA, spec, Grid.box(-0.1, 0.1, 5, 3), h=0.005)
    for idx in [(2, 2, 2), (1, 3, 2)]:
        u = real.u[idx]
        w = weingarten(np.linalg.inv(ETA), second_forms(third_tensor(builtin("septic_n3")[0], u), spec))
        np.testing.assert_allclose(measured_weingarten(real, idx), w.shape, atol=5e-3)


def test_diagonalizing_transform():
    conn = Connection(quintic(), ETA, GramSpec(2, 1, np.diag([1.0, -1.0])))
    p = diagonalizing_transform(conn.gram)
    pinv = np.linalg.inv(p)
    d = pinv.T @ conn.gram @ pinv
    ine = inertia(conn.gram)
    expected = np.diag([1.0] * ine.positive + [-1.0] * ine.negative)
    np.testing.assert_allclose(d, expected, atol=1e-12)
