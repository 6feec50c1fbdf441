# Benchmark interfaces and their reference distances
import numpy as np
import pytest
from scipy.special import ellipe

from redist.cases import gen_case, CASES
from redist.cases.builder import case_ellipse, case_intersecting_circles, case_multi_circle, \
    multi_circle_layout


def random_points(rng, n=2000, half_width=2.0):
    return rng.uniform(-half_width, half_width, size=(2, n))


def arc_samples(cx, cy, r, n=20000):
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([cx + r * np.cos(theta), cy + r * np.sin(theta)])


def nearest(points, x, y):
    d = np.hypot(x[:, None] - points[None, :, 0], y[:, None] - points[None, :, 1])
    return d.min(axis=1)


def test_registry():
    assert set(CASES) == {'circle', 'ellipse', 'xcircles', 'square', 'multi'}
    with pytest.raises(ValueError):
        gen_case('torus')


@pytest.mark.parametrize("name", ['circle', 'xcircles', 'square', 'multi'])
def test_phi0_sign_matches_exact(name, rng):
    case = gen_case(name)
    x, y = random_points(rng)
    assert (case.phi0(x, y) * case.exact(x, y) >= 0).all()
    assert case.half_width == 2.0
    assert case.half_diagonal == pytest.approx(2.0 * np.sqrt(2.0))


def test_circle():
    case = gen_case('circle')
    assert case.exact(0.0, 0.0) == -1.0
    assert case.exact(2.0, 0.0) == pytest.approx(1.0)
    assert case.interface_length == pytest.approx(2.0 * np.pi)
    assert case.final_time is None


def test_intersecting_circles_values():
    case = gen_case('xcircles')
    assert case.exact(1.7, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert case.exact(2.7, 0.0) == pytest.approx(1.0)
    assert case.exact(0.3, 0.0) == pytest.approx(-np.sqrt(0.6))
    assert case.exact(0.7, 0.0) == pytest.approx(-1.0)
    assert case.exact(-0.7, 0.0) == pytest.approx(-1.0)
    assert case.interface_length == pytest.approx(4.0 * (np.pi - np.arccos(0.7)))
    assert case.final_time == 1.0
    with pytest.raises(ValueError):
        case_intersecting_circles(r=1.0, a=1.2)


def test_intersecting_circles_oracle(rng):
    case = gen_case('xcircles')
    boundary = np.vstack([arc_samples(-0.7, 0.0, 1.0), arc_samples(0.7, 0.0, 1.0)])
    # keep the arcs of each circle lying outside the other disc
    keep = (np.hypot(boundary[:, 0] - 0.7, boundary[:, 1]) >= 1.0 - 1e-12) \
        & (np.hypot(boundary[:, 0] + 0.7, boundary[:, 1]) >= 1.0 - 1e-12)
    x, y = random_points(rng, 400)
    exact = case.exact(x, y)
    np.testing.assert_allclose(np.abs(exact), nearest(boundary[keep], x, y), atol=1e-3)


def test_multi_circle_layout():
    circles = multi_circle_layout()
    assert len(circles) == 12
    assert circles[0] == pytest.approx((-1.5, -1.2, 0.35))
    centres = np.array([c[:2] for c in circles])
    gaps = np.hypot(*(centres[:, None, :] - centres[None, :, :]).transpose(2, 0, 1))
    assert gaps[~np.eye(12, dtype=bool)].min() > 0.7


def test_multi_circle_oracle(rng):
    case = gen_case('multi')
    assert case.final_time == 1.1
    assert case.interface_length == pytest.approx(12 * 2.0 * np.pi * 0.35)
    boundary = np.vstack([arc_samples(cx, cy, r, 4000) for cx, cy, r in multi_circle_layout()])
    x, y = random_points(rng, 400)
    np.testing.assert_allclose(np.abs(case.exact(x, y)), nearest(boundary, x, y), atol=1e-3)
    assert case.exact(-1.5, -1.2) == pytest.approx(-0.35)
    with pytest.raises(ValueError):
        case_multi_circle([])
    single = case_multi_circle([(0, 0, 1)])
    assert single.exact(0.0, 2.0) == pytest.approx(1.0)


def test_ellipse(rng):
    case = gen_case('ellipse')
    assert case.exact(1.5, 0.0) == pytest.approx(0.5, abs=1e-6)
    assert case.exact(0.0, 1.0) == pytest.approx(0.5, abs=1e-6)
    assert case.exact(0.0, 0.0) == pytest.approx(-0.5, abs=1e-6)
    # perimeter of the ellipse with semi-axes 1 and 0.5
    a, b = 1.0, 0.5
    assert case.interface_length == pytest.approx(4.0 * a * ellipe(1.0 - (b / a) ** 2), rel=1e-12)
    ramanujan = np.pi * (3 * (a + b) - np.sqrt((3 * a + b) * (a + 3 * b)))
    assert case.interface_length == pytest.approx(ramanujan, rel=1e-5)

    x, y = random_points(rng, 500)
    coarse = case_ellipse(samples=50000)
    np.testing.assert_allclose(coarse.exact(x, y), case.exact(x, y), atol=1e-3)
    assert (case.phi0(x, y) * case.exact(x, y) >= 0).all()


def test_square(rng):
    case = gen_case('square')
    assert case.exact(0.0, 0.0) == -1.0
    assert case.exact(2.0, 0.0) == pytest.approx(1.0)
    assert case.exact(2.0, 2.0) == pytest.approx(np.sqrt(2.0))
    assert case.interface_length == 8.0
    assert case.final_time == 1.5

    x, y = random_points(rng)
    exact = case.exact(x, y)
    smooth = (np.abs(np.abs(x) - np.abs(y)) > 0.01) & (np.abs(exact) > 0.01)
    x, y = x[smooth], y[smooth]
    eps = 1e-6
    gx = (case.exact(x + eps, y) - case.exact(x - eps, y)) / (2 * eps)
    gy = (case.exact(x, y + eps) - case.exact(x, y - eps)) / (2 * eps)
    np.testing.assert_allclose(np.hypot(gx, gy), 1.0, atol=1e-6)
