# Banded error norms, interface displacement and convergence orders
import numpy as np
import pytest

from redist.utils.metrics import (band_mask, banded_norms, compute_errors, eikonal_residual,
                                  interface_l1, observed_order, smoothed_heaviside, smoothed_sign)


def circle(space):
    return np.hypot(space.x, space.y) - 1.0


def test_zero_error(space240):
    exact = circle(space240)
    assert banded_norms(exact, exact, space240) == (0.0, 0.0, 0.0)


def test_constant_error(space240):
    exact = circle(space240)
    l2, linf, raw = banded_norms(exact + 0.01, exact, space240)
    # the domain [-2, 2]^2 has area 16
    assert raw == pytest.approx(16.0 * 0.01 ** 2, rel=1e-10)
    assert l2 == pytest.approx(0.04, rel=1e-10)
    assert linf == pytest.approx(0.01, rel=1e-10)


def test_band_excludes_far_elements(space240):
    exact = circle(space240)
    band = band_mask(exact, 0.2)
    centroid = np.stack([space240.x.mean(axis=1), space240.y.mean(axis=1)])
    origin_elem = np.argmin(np.hypot(*centroid))
    assert not band[origin_elem]
    assert band.any() and not band.all()
    with pytest.raises(ValueError):
        band_mask(exact, 0.0)
    with pytest.raises(ValueError):
        banded_norms(exact, exact + 5.0, space240, band_eps=0.1)


def test_norm_scaling_and_band_growth(space240, rng):
    exact = circle(space240)
    err = 1e-3 * rng.normal(size=exact.shape)
    l2, linf, _ = banded_norms(exact + err, exact, space240, 0.3)
    l2_twice, linf_twice, _ = banded_norms(exact + 2.0 * err, exact, space240, 0.3)
    assert l2_twice == pytest.approx(2.0 * l2, rel=1e-12)
    assert linf_twice == pytest.approx(2.0 * linf, rel=1e-12)
    l2_wide, linf_wide, _ = banded_norms(exact + err, exact, space240, 0.8)
    assert l2_wide >= l2 and linf_wide >= linf


def test_observed_order():
    np.testing.assert_allclose(observed_order([1.0, 1.0 / 16.0], [1.0, 0.5]), [4.0])
    np.testing.assert_allclose(observed_order([0.4, 0.1, 0.025], [0.2, 0.1, 0.05]), [2.0, 2.0])
    assert np.isnan(observed_order([0.0, 0.1], [0.2, 0.1])[0])
    with pytest.raises(ValueError):
        observed_order([0.1], [0.2])
    with pytest.raises(ValueError):
        observed_order([0.2, 0.1], [0.1, 0.2])


def test_smoothed_heaviside():
    x = np.linspace(-2.0, 2.0, 41)
    heaviside = smoothed_heaviside(x, 0.5)
    assert smoothed_heaviside(0.0, 0.5) == 0.5
    np.testing.assert_allclose(heaviside + heaviside[::-1], 1.0, atol=1e-14)
    assert (np.diff(heaviside) > 0).all()
    np.testing.assert_allclose(smoothed_sign(x, 0.5), 2.0 * heaviside - 1.0, atol=1e-14)


def test_interface_shift(space240):
    exact = space240.x
    signed, absolute = interface_l1(exact - 0.01, exact, space240, 1.0, 4.0)
    assert signed == pytest.approx(-0.01, rel=0.1)
    assert absolute == pytest.approx(0.01, rel=0.1)
    with pytest.raises(ValueError):
        interface_l1(exact, exact, space240, 0.0, 4.0)


def test_eikonal_residual(space240):
    median, worst = eikonal_residual(0.6 * space240.x + 0.8 * space240.y, space240)
    assert median < 1e-10 and worst < 1e-10
    assert np.isnan(eikonal_residual(space240.x, space240, np.zeros(space240.K, dtype=bool))[0])


def test_compute_errors(space240):
    exact = circle(space240)
    report = compute_errors(exact + 0.01, exact, space240, np.inf, 2.0 * np.pi, h_char=0.4)
    row = report.as_dict()
    assert set(row) == {'l2', 'linf', 'l1', 'l1_abs', 'l2_raw', 'band_eps', 'h_char'}
    assert row['l2'] == pytest.approx(0.04, rel=1e-10)
    # a positive shift moves the interface inward
    assert row['l1'] > 0
    assert report.h_char == 0.4
