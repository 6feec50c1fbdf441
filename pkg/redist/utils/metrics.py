"""
Error norms of a reinitialized field against the exact signed distance.
"""
import logging
import numpy as np

from ..discretization.ldg import ldg_gradients


class ErrorReport(object):
    """
    Parameters
    ----------
    l2: float
        Banded L2 norm (square root of the summed elemental inner products)
    linf: float
        Banded maximum nodal error
    l1_interface: float
        Signed smoothed-Heaviside mismatch per unit interface length
    band_eps: float
    h_char: float
    l2_raw: float
        Summed inner products before the square root
    l1_abs: float
        Mismatch with the absolute value taken inside the integral
    """
    def __init__(self, l2, linf, l1_interface, band_eps, h_char, l2_raw=None, l1_abs=None):
        self.l2 = l2
        self.linf = linf
        self.l1_interface = l1_interface
        self.band_eps = band_eps
        self.h_char = h_char
        self.l2_raw = l2 ** 2 if l2_raw is None else l2_raw
        self.l1_abs = abs(l1_interface) if l1_abs is None else l1_abs

    def as_dict(self):
        return {'l2': self.l2, 'linf': self.linf, 'l1': self.l1_interface,
                'l1_abs': self.l1_abs, 'l2_raw': self.l2_raw,
                'band_eps': self.band_eps, 'h_char': self.h_char}


def band_mask(exact, band_eps):
    """Elements whose minimum nodal |exact| lies within band_eps."""
    if not band_eps > 0:
        raise ValueError("band_eps must be positive or inf, got {0}".format(band_eps))
    return np.abs(exact).min(axis=1) <= band_eps


def elemental_integrals(field, space):
    """Integral of a nodal field over each element, J * 1^T M f."""
    return space.geom.J * (field @ space.re.M.sum(axis=0))


def banded_norms(phi, exact, space, band_eps=np.inf):
    """
    Banded L2 and Linf errors.

    Returns
    ----------
    l2, linf, l2_raw: float
    """
    band = band_mask(exact, band_eps)
    if not band.any():
        raise ValueError("No element lies within the band eps={0}".format(band_eps))
    err = (phi - exact)[band]
    raw = float((space.geom.J[band] * np.einsum('ki,ij,kj->k', err, space.re.M, err)).sum())
    return np.sqrt(raw), float(np.abs(err).max()), raw


def smoothed_heaviside(phi, h):
    """0.5 (1 + tanh(pi phi / h))."""
    return 0.5 * (1.0 + np.tanh(np.pi * np.asarray(phi) / h))


def smoothed_sign(phi, h):
    """Regularized sign, 2 H_h(phi) - 1 = tanh(pi phi / h)."""
    return np.tanh(np.pi * np.asarray(phi) / h)


def interface_l1(phi, exact, space, h_char, interface_length):
    """
    Interface displacement (1 / L) sum_e (H_h(phi) - H_h(exact), 1)_e.

    Returns
    ----------
    signed, absolute: float
    """
    if h_char <= 0:
        raise ValueError("h_char must be positive, got {0}".format(h_char))
    diff = smoothed_heaviside(phi, h_char) - smoothed_heaviside(exact, h_char)
    signed = elemental_integrals(diff, space).sum() / interface_length
    absolute = elemental_integrals(np.abs(diff), space).sum() / interface_length
    return float(signed), float(absolute)


def observed_order(errors, h):
    """Per-pair orders log(E_k / E_k+1) / log(h_k / h_k+1); nan where an error vanishes."""
    errors = np.asarray(errors, dtype=float)
    h = np.asarray(h, dtype=float)
    if len(errors) < 2 or len(errors) != len(h):
        raise ValueError("Need matching error and size sequences of length >= 2")
    if (np.diff(h) >= 0).any():
        raise ValueError("Mesh sizes must be strictly decreasing")
    with np.errstate(divide='ignore', invalid='ignore'):
        orders = np.log(errors[:-1] / errors[1:]) / np.log(h[:-1] / h[1:])
    bad = (errors[:-1] <= 0) | (errors[1:] <= 0)
    return np.where(bad, np.nan, orders)


def eikonal_residual(phi, space, mask=None):
    """Median and max of ||grad phi| - 1| over the nodes of masked elements."""
    g = ldg_gradients(phi, space).mean
    residual = np.abs(np.hypot(g[0], g[1]) - 1.0)
    if mask is not None:
        residual = residual[mask]
    if residual.size == 0:
        return np.nan, np.nan
    return float(np.median(residual)), float(residual.max())


def compute_errors(phi, exact, space, band_eps, interface_length, h_char=None, logger=None):
    """All norms of one run collected into an ErrorReport."""
    logger = logger or logging.getLogger(__name__)
    h_char = space.mesh.characteristic_length() if h_char is None else h_char
    l2, linf, raw = banded_norms(phi, exact, space, band_eps)
    l1, l1_abs = interface_l1(phi, exact, space, h_char, interface_length)
    logger.info("L2 {0:.4e} (raw {1:.4e})  Linf {2:.4e}  L1 {3:.4e} (abs {4:.4e})".format(
        l2, raw, linf, l1, l1_abs))
    return ErrorReport(l2, linf, l1, band_eps, h_char, l2_raw=raw, l1_abs=l1_abs)
