# ENO interpolation, root finding and distance reconstruction from arrival times
import numpy as np
import pytest

from redist.solver.arrival import NewtonPolynomial, eno_interpolant, find_root, reconstruct_distance
from redist.solver.timeloop import HistoryBuffer


TIMES = np.arange(6) * 0.125


def test_linear_reproduction():
    poly = eno_interpolant(TIMES, 0.625 - 2.0 * TIMES, 2)
    t = np.linspace(0.0, 0.625, 11)
    np.testing.assert_allclose(poly(t), 0.625 - 2.0 * t, atol=1e-14)
    np.testing.assert_allclose(poly.derivative(t), -2.0, atol=1e-12)


def test_cubic_reproduction():
    values = TIMES ** 3 - TIMES + 0.1
    poly = eno_interpolant(TIMES, values, 2)
    assert poly.degree == 3
    t = np.linspace(0.25, 0.375, 7)
    np.testing.assert_allclose(poly(t), t ** 3 - t + 0.1, atol=1e-13)


def test_stencil_avoids_outlier():
    values = 0.625 - 2.0 * TIMES
    values[0] = 5.0
    poly = eno_interpolant(TIMES, values, 2)
    # ties go left, the outlier at t=0 pushes the last point right
    assert poly.start == 1
    np.testing.assert_array_equal(poly.stencil(TIMES), TIMES[1:5])
    assert find_root(poly, TIMES[2], TIMES[3]) == pytest.approx(0.3125, abs=1e-13)


def test_order_drops_with_short_stencil():
    assert eno_interpolant(TIMES[:3], [0.2, -0.1, -0.3], 0).degree == 2
    assert eno_interpolant(TIMES[:2], [0.2, -0.1], 0).degree == 1


def test_eno_validation():
    with pytest.raises(ValueError):
        eno_interpolant(TIMES, np.ones(5), 2)
    with pytest.raises(ValueError):
        eno_interpolant(TIMES, np.ones(6), 5)
    with pytest.raises(ValueError):
        eno_interpolant(TIMES[::-1], np.ones(6), 2)


def test_find_root_examples():
    linear = NewtonPolynomial([0.0], [1.0, -2.0])
    assert find_root(linear, 0.4, 0.6) == pytest.approx(0.5, abs=1e-14)

    cubic = NewtonPolynomial([0.0, 0.0, 0.0], [-0.001, 0.0, 0.0, 1.0])
    assert find_root(cubic, 0.0, 0.5) == pytest.approx(0.1, abs=1e-10)

    # (t - 0.3)(t + 1)(t + 2) in Newton form
    factored = NewtonPolynomial([0.3, -1.0, -2.0], [0.0, 0.0, 0.0, 1.0])
    assert find_root(factored, 0.25, 0.35) == pytest.approx(0.3, abs=1e-13)

    with pytest.raises(ValueError):
        find_root(linear, 0.0, 0.4)


def test_arrival_order():
    root = np.log(2.0)
    errors = []
    steps = [0.1, 0.05, 0.025]
    for dt in steps:
        t = root - 2.4 * dt + dt * np.arange(6)
        poly = eno_interpolant(t, np.exp(-t) - 0.5, 2)
        errors.append(abs(find_root(poly, t[2], t[3]) - root))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert (rates >= 3.5).all()


def plane_history(phi0, dt, nsteps):
    history = HistoryBuffer(phi0.size)
    for n in range(nsteps + 1):
        t = n * dt
        history.record(t, phi0 - t, -phi0 - t)
    return history


def test_reconstruct_plane():
    phi0 = np.array([0.35, -0.22, 0.0, 2.0, -0.07])
    history = plane_history(phi0, 0.05, 20)
    result = reconstruct_distance(history, phi0, 1.0)
    np.testing.assert_allclose(result.phi[[0, 1, 4]], phi0[[0, 1, 4]], atol=1e-12)
    assert result.phi[2] == 0.0
    # no crossing before the final time: clamped and flagged
    assert result.phi[3] == 1.0
    np.testing.assert_array_equal(result.resolved, [True, True, True, False, True])
    assert result.unresolved_count == 1


def test_reconstruct_keeps_shape():
    phi0 = np.array([[0.1, -0.3], [0.45, -0.6]])
    result = reconstruct_distance(plane_history(phi0.ravel(), 0.1, 8), phi0, 0.8)
    assert result.phi.shape == (2, 2)
    np.testing.assert_allclose(result.phi, phi0, atol=1e-12)
    with pytest.raises(ValueError):
        reconstruct_distance(plane_history(np.ones(3), 0.1, 2), phi0, 0.2)


def test_find_root_near_triple_root():
    assert find_root(NewtonPolynomial([0.0], [-0.5, 1.0]), 0.0, 1.0) == 0.5
    square = NewtonPolynomial([0.0, 0.0], [-0.25, 0.0, 1.0])
    assert find_root(square, 0.3, 0.7) == pytest.approx(0.5, abs=1e-12)
    # (t - 0.5)^3 + 1e-6 (t - 0.5)
    flat = NewtonPolynomial([0.5, 0.5, 0.5], [0.0, 1e-6, 0.0, 1.0])
    assert find_root(flat, 0.0, 1.0) == pytest.approx(0.5, abs=1e-9)
    assert find_root(flat, 0.1, 1.0) == pytest.approx(0.5, abs=1e-6)
