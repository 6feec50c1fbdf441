import logging
import numpy as np

from ..discretization.ldg import dg_rhs, ldg_gradients, DELTA
from ..stabilization.fvsubcell import SubcellScheme


class EikonalOperator(object):
    """
    Semi-discrete right-hand side -H(grad phi) on a mixed DG / subcell-FV state.

    Troubled elements advance their subcell means; the remaining elements
    advance nodal values and take coupled fluxes on faces shared with troubled
    ones. Frozen elements (outside the band) never change.

    Parameters
    ----------
    space: DGSpace
    fv_order: int
    frozen: ndarray (K,) of bool, optional
    """
    def __init__(self, space, fv_order=2, frozen=None, logger=None):
        self.logger = logger or logging.getLogger(__name__)
        self.space = space
        self.frozen = np.zeros(space.K, dtype=bool) if frozen is None else np.asarray(frozen, dtype=bool)
        self.subcells = SubcellScheme(space, fv_order, frozen=self.frozen, logger=self.logger)

    @property
    def active(self):
        return ~self.frozen

    def rhs(self, nodal, means, troubled):
        """
        Parameters
        ----------
        nodal: ndarray (K, Np)
        means: ndarray (K, Ns)
            Only rows of troubled elements are read
        troubled: ndarray (K,) of bool

        Returns
        ----------
        dnodal, dmeans: ndarray
        """
        troubled = troubled & self.active
        dmeans = np.zeros_like(means)
        override = None
        if troubled.any():
            owners, rates, override = self.subcells.rhs(means, nodal, troubled)
            dmeans[owners] = rates
        dnodal = dg_rhs(nodal, self.space, troubled=troubled, frozen=self.frozen, override=override)
        dmeans[self.frozen] = 0.0
        return dnodal, dmeans


def frozen_elements(phi0, space, band_eps):
    """
    Elements left untouched by a banded run: the smallest nodal distance
    estimate |phi0| / |grad phi0| exceeds band_eps + 2 h_e, h_e being the
    longest edge of the element. Nothing is frozen for an infinite band.
    """
    if not np.isfinite(band_eps):
        return np.zeros(space.K, dtype=bool)
    g = ldg_gradients(phi0, space).mean
    slope = np.maximum(np.hypot(g[0], g[1]), DELTA)
    estimate = (np.abs(phi0) / slope).min(axis=1)
    h_e = space.mesh.face_lengths().max(axis=1)
    return estimate > band_eps + 2.0 * h_e
