# Low-storage RK4, step size, history buffer and the time loop
import numpy as np
import pytest

from redist.discretization.mesh import Mesh, refine_uniform
from redist.solver import EikonalOperator
from redist.discretization.refelem import nodal_to_modal, modal_to_nodal
from redist.stabilization.detector import detect
from redist.solver.timeloop import (FlowState, HistoryBuffer, SolverError, advance, compute_dt,
                                    lserk4_step, screen_troubled)


def test_compute_dt_equilateral():
    mesh = Mesh([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]], [[0, 1, 2]])
    r_in = 1.0 / (2.0 * np.sqrt(3.0))
    assert compute_dt(mesh, 3, 1.0) == pytest.approx(r_in / 16.0, rel=1e-12)
    assert compute_dt(mesh, 3, 0.5) == pytest.approx(0.5 * compute_dt(mesh, 3, 1.0), rel=1e-12)


def test_compute_dt_refinement(mesh240):
    assert compute_dt(refine_uniform(mesh240), 2, 1.0) == pytest.approx(
        0.5 * compute_dt(mesh240, 2, 1.0), rel=1e-10)
    with pytest.raises(ValueError):
        compute_dt(mesh240, 2, 0.0)
    with pytest.raises(ValueError):
        compute_dt(mesh240, 2, -1.0)


def _decay_error(dt):
    y = [np.array([1.0])]
    t = 0.0
    for _ in range(int(round(1.0 / dt))):
        lserk4_step(y, t, dt, lambda t, y: [-y[0]])
        t += dt
    return abs(y[0][0] - np.exp(-1.0))


def test_lserk4_order():
    e1, e2 = _decay_error(0.1), _decay_error(0.05)
    assert np.log2(e1 / e2) >= 3.9


def test_lserk4_trivial_rates():
    y = [np.array([2.0, -1.0])]
    lserk4_step(y, 0.0, 0.3, lambda t, y: [np.zeros_like(y[0])])
    np.testing.assert_array_equal(y[0], [2.0, -1.0])
    lserk4_step(y, 0.0, 0.3, lambda t, y: [np.full_like(y[0], 2.0)])
    np.testing.assert_allclose(y[0], [2.6, -0.4], atol=1e-14)


def test_lserk4_non_finite():
    y = [np.zeros((3, 2))]

    def rhs(t, y):
        rate = np.zeros((3, 2))
        rate[1, 0] = np.nan
        return [rate]

    with pytest.raises(SolverError) as err:
        lserk4_step(y, 0.0, 0.1, rhs)
    assert err.value.element == 1
    assert err.value.stage == 0


def test_history_mirror_seed():
    times = [0.0, 0.1, 0.2, 0.3, 0.4]
    u = [np.array([0.05 - t]) for t in times]
    v = [np.array([0.3 + t]) for t in times]
    history = HistoryBuffer(1)
    for t, a, b in zip(times, u, v):
        history.record(t, a, b)
    history.finalize()

    st, sv, size, bracket = history.stencil(0)
    assert size[0] == 6 and bracket[0] == 2
    np.testing.assert_array_equal(st[0], [-times[2], -times[1], times[0], times[1], times[2], times[3]])
    np.testing.assert_array_equal(sv[0], [-v[2][0], -v[1][0], u[0][0], u[1][0], u[2][0], u[3][0]])
    assert not history.crossed[1, 0]


def test_history_short_run():
    history = HistoryBuffer(2)
    history.record(0.0, np.array([0.1, 1.0]), np.array([-0.1, -1.0]))
    history.record(0.2, np.array([-0.1, 0.8]), np.array([-0.3, -1.2]))
    history.finalize()
    st, sv, size, bracket = history.stencil(0)
    # one mirrored sample, the bracket and the final sample
    assert size[0] == 3 and bracket[0] == 1
    np.testing.assert_array_equal(st[0, :3], [-0.2, 0.0, 0.2])
    assert size[1] == 0


def test_history_time_must_increase():
    history = HistoryBuffer(1)
    history.record(0.5, np.ones(1), np.ones(1))
    with pytest.raises(ValueError):
        history.record(0.5, np.ones(1), np.ones(1))


def test_advance_zero_time(small_space):
    state = FlowState.from_initial(small_space.x, small_space.sg)
    state, history = advance(state, EikonalOperator(small_space), 0.0)
    assert history.count == 1
    assert state.step == 0
    np.testing.assert_array_equal(state.u, small_space.x)


@pytest.mark.parametrize("limiter", ["off", "on"])
def test_translating_plane(small_space, limiter):
    state = FlowState.from_initial(small_space.x, small_space.sg)
    state, history = advance(state, EikonalOperator(small_space), 0.1, limiter=limiter)
    assert state.t == pytest.approx(0.1)
    assert history.count == state.step + 1
    np.testing.assert_allclose(state.u, small_space.x - 0.1, atol=1e-9)
    np.testing.assert_allclose(state.v, -small_space.x - 0.1, atol=1e-9)
    if limiter == "on":
        assert state.troubled.all()


def test_frozen_elements_untouched(small_space):
    phi0 = small_space.x ** 2 - small_space.y
    frozen = np.arange(small_space.K) % 2 == 0
    state = FlowState.from_initial(phi0, small_space.sg)
    state, _ = advance(state, EikonalOperator(small_space, frozen=frozen), 0.05, limiter="off")
    np.testing.assert_array_equal(state.u[frozen], phi0[frozen])
    np.testing.assert_array_equal(state.v[frozen], -phi0[frozen])
    assert (state.u[~frozen] != phi0[~frozen]).any()


def test_advance_arguments(small_space):
    state = FlowState.from_initial(small_space.x, small_space.sg)
    op = EikonalOperator(small_space)
    with pytest.raises(ValueError):
        advance(state, op, -1.0)
    with pytest.raises(ValueError):
        advance(state, op, 0.1, limiter="sometimes")


def test_compute_dt_linear_elements():
    a = 0.3
    mesh = Mesh([[0.0, 0.0], [a, 0.0], [0.5 * a, np.sqrt(3.0) / 2.0 * a]], [[0, 1, 2]])
    assert compute_dt(mesh, 1, 0.8) == pytest.approx(0.8 * a / (2.0 * np.sqrt(3.0)) / 4.0, rel=1e-12)


def test_lserk4_unit_decrease():
    y = [np.array([0.8, -0.2])]
    for n in range(5):
        lserk4_step(y, n * 0.01, 0.01, lambda t, y: [-np.ones_like(y[0])])
        np.testing.assert_allclose(y[0], [0.8 - 0.01 * (n + 1), -0.2 - 0.01 * (n + 1)], atol=1e-12)


def test_banded_plane_stays_exact(small_space):
    phi0 = small_space.x
    frozen = np.abs(small_space.x).min(axis=1) > 0.6
    assert frozen.any() and not frozen.all()
    state = FlowState.from_initial(phi0, small_space.sg)
    state, _ = advance(state, EikonalOperator(small_space, frozen=frozen), 0.1, limiter="off")
    np.testing.assert_allclose(state.u[~frozen], phi0[~frozen] - 0.1, atol=1e-9)
    np.testing.assert_allclose(state.v[~frozen], -phi0[~frozen] - 0.1, atol=1e-9)
    np.testing.assert_array_equal(state.u[frozen], phi0[frozen])


def noisy_plane(space):
    """x - 0.3 with degree-N modes as large as the linear part."""
    re = space.re
    modal = nodal_to_modal(re, space.x - 0.3)
    linear = np.linalg.norm(modal[:, re.degree == 1], axis=1)
    modal[:, re.degree == re.N] = linear[:, None]
    return modal_to_nodal(re, modal)


def troubled_state(field, sg):
    state = FlowState.from_initial(field, sg)
    state.troubled[:] = True
    state.u_means[:] = state.u @ sg.P.T
    state.v_means[:] = state.v @ sg.P.T
    return state


def test_screen_releases_smooth_elements(space240):
    field = noisy_plane(space240)
    re = space240.re
    assert detect(field, re).troubled.all()
    state = troubled_state(field, space240.sg)
    active = np.ones(space240.K, dtype=bool)
    troubled, released = screen_troubled(state, re, 'auto', 1.0, active)
    assert not troubled.any() and released.all()
    np.testing.assert_allclose(state.u, space240.x - 0.3, atol=1e-10)
    np.testing.assert_allclose(state.v, 0.3 - space240.x, atol=1e-10)


def test_screen_only_in_auto_mode(space240):
    re = space240.re
    field = noisy_plane(space240)
    state = troubled_state(field, space240.sg)
    troubled, _ = screen_troubled(state, re, 'always_on', 1.0, np.ones(space240.K, dtype=bool))
    assert troubled.all()
    np.testing.assert_array_equal(state.u, field)


def test_troubled_set_shrinks_on_smooth_data(space240):
    state = troubled_state(noisy_plane(space240), space240.sg)
    state, _ = advance(state, EikonalOperator(space240), 0.02, limiter="auto")
    assert not state.troubled.any()
    np.testing.assert_allclose(state.u, space240.x - 0.32, atol=1e-9)
