"""
Finite-volume subcell scheme for troubled elements.

Subcell means are advanced with the degenerate LDG scheme: piecewise-constant
data has no volume term, so the one-sided gradients are pure sums of upwind
sub-edge traces. Traces are extrapolated with WENO gradients built from three
planar fits per subcell. Faces shared with DG elements are coupled through
the face projection Pf and reconstruction Rf with a single flux evaluation.
"""
import logging
import numpy as np

from ..discretization.space import BOUNDARY
from ..discretization.subgrid import MACRO
from ..discretization.ldg import GradientPair, FluxOverride, llf_hamiltonian


WENO_EPS = 1e-6
WENO_POWER = 4
STENCILS = ((0, 1), (1, 2), (2, 0))
SINGULAR_TOL = 1e-12


class SubcellState(object):
    """
    Subcell averages of one or more troubled elements.

    Parameters
    ----------
    means: ndarray (n, Ns)
    owner: ndarray (n,)
        Macro element ids
    """
    def __init__(self, means, owner):
        self.means = means
        self.owner = owner


class WenoGradient(object):
    """
    Parameters
    ----------
    grad: ndarray (n, Ns, 2)
    weights: ndarray (n, Ns, 3)
    indicators: ndarray (n, Ns, 3)
        Oscillation indicators gamma_j (inf for dropped stencils)
    stranded: ndarray (n, Ns) of bool
        Subcells left without any usable stencil
    """
    def __init__(self, grad, weights, indicators, stranded):
        self.grad = grad
        self.weights = weights
        self.indicators = indicators
        self.stranded = stranded


class CoupledFlux(object):
    """
    Upwind sub-edge fluxes on DG/FV interfaces.

    fv_flux (4, n, N+1) is ordered along the FV element's face; dg_flux
    (4, n, Nfp) is Rf applied to the same array, ordered along the DG face.
    """
    def __init__(self, fv_flux, dg_flux, dg_means):
        self.fv_flux = fv_flux
        self.dg_flux = dg_flux
        self.dg_means = dg_means


def demote_element(nodal, sg, owner=None):
    nodal = np.atleast_2d(nodal)
    owner = np.arange(nodal.shape[0]) if owner is None else np.asarray(owner)
    return SubcellState(nodal @ sg.P.T, owner)


def promote_element(state, sg):
    return state.means @ sg.R.T


def dg_face_means(nodal, space):
    """Sub-edge means of every DG face trace, ordered along each face, shape (K, 3, N+1)."""
    return np.einsum('fjn,kfn->kfj', space.sg.Pf, space.face_values(nodal))


def couple_faces(dg_trace, fv_trace, normal, Pf, Rf):
    """
    Single-evaluation fluxes on faces between a DG and an FV element.

    Parameters
    ----------
    dg_trace: ndarray (n, Nfp)
        DG face nodal values, ordered along the DG element's face
    fv_trace: ndarray (n, N+1)
        FV sub-edge trace values, ordered along the FV element's face
    normal: ndarray (n, 2)
        Unit normal pointing out of the FV element
    Pf, Rf: ndarray (n, N+1, N+1)
        Face projection / reconstruction of the DG side's face
    """
    if dg_trace.shape[-1] != Pf.shape[-1] or fv_trace.shape[-1] != Pf.shape[-2]:
        raise ValueError("Face orientation mismatch: {0} DG values, {1} FV sub-edges".format(
            dg_trace.shape[-1], fv_trace.shape[-1]))
    dg_means = np.einsum('ijk,ik->ij', Pf, dg_trace)[:, ::-1]
    nx = normal[:, 0:1]
    ny = normal[:, 1:2]
    fv_flux = np.stack([np.where(nx >= 0, fv_trace, dg_means),
                        np.where(ny >= 0, fv_trace, dg_means),
                        np.where(nx >= 0, dg_means, fv_trace),
                        np.where(ny >= 0, dg_means, fv_trace)])
    dg_flux = np.einsum('ijk,aik->aij', Rf, fv_flux[:, :, ::-1])
    return CoupledFlux(fv_flux, dg_flux, dg_means)


def closed_slots(kind, nbr_elem, frozen):
    if frozen is None:
        return np.zeros(kind.shape, dtype=bool)
    return (kind == MACRO) & np.asarray(frozen, dtype=bool)[nbr_elem]


def stencil_data(means, nodal, troubled, space, owners, frozen=None):
    """
    Neighbor values and anchor points of every subcell edge slot of `owners`.

    Internal and FV neighbors contribute their mean at their centroid. A DG
    neighbor contributes its sub-edge mean as the ghost 2*m_face - m_own at the
    reflection of the owner centroid through the sub-edge midpoint. Domain
    boundary slots and slots facing a frozen element are unavailable.
    """
    kind = space.slot_kind[owners]
    nbr_elem = space.slot_elem[owners]
    nbr_cell = space.slot_cell[owners]
    own_mean = means[owners]
    own_c = space.sub_centroids[owners]

    values = means[nbr_elem, nbr_cell]
    points = space.sub_centroids[nbr_elem, nbr_cell]

    closed = closed_slots(kind, nbr_elem, frozen)
    dg_slot = (kind == MACRO) & ~troubled[nbr_elem] & ~closed
    if dg_slot.any():
        face_means = dg_face_means(nodal, space)
        ghost = face_means[nbr_elem, space.slot_nbr_face[owners], space.slot_nbr_segment[owners]]
        values = np.where(dg_slot, 2.0 * ghost - own_mean[..., None], values)
        reflected = 2.0 * space.sub_midpoints[owners] - own_c[:, :, None, :]
        points = np.where(dg_slot[..., None], reflected, points)
    return values, points, (kind != BOUNDARY) & ~closed


def weno_gradient(means, nodal, troubled, space, owners=None, frozen=None, warn=True, logger=None):
    """
    WENO subcell gradients of troubled elements.

    Each subcell fits three planes through its centroid and two of its three
    edge neighbors; stencil j gets weight (eps + gamma_j)^-r normalised, with
    gamma_j the fitted slope magnitude over the subcell area. Singular or
    unavailable stencils are dropped.
    """
    logger = logger or logging.getLogger(__name__)
    owners = np.flatnonzero(troubled) if owners is None else np.asarray(owners)
    values, points, available = stencil_data(means, nodal, troubled, space, owners, frozen)
    own_mean = means[owners]
    d = points - space.sub_centroids[owners][:, :, None, :]
    dv = values - own_mean[..., None]
    area = space.sub_areas[owners]

    fits = np.zeros(own_mean.shape + (3, 2))
    indicators = np.full(own_mean.shape + (3,), np.inf)
    usable = np.zeros(own_mean.shape + (3,), dtype=bool)
    with np.errstate(divide='ignore', invalid='ignore'):
        for j, (a, b) in enumerate(STENCILS):
            d1, d2 = d[..., a, :], d[..., b, :]
            det = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
            scale = np.linalg.norm(d1, axis=-1) * np.linalg.norm(d2, axis=-1)
            ok = available[..., a] & available[..., b] & (np.abs(det) > SINGULAR_TOL * scale)
            gx = (dv[..., a] * d2[..., 1] - dv[..., b] * d1[..., 1]) / det
            gy = (d1[..., 0] * dv[..., b] - d2[..., 0] * dv[..., a]) / det
            fits[..., j, 0] = np.where(ok, gx, 0.0)
            fits[..., j, 1] = np.where(ok, gy, 0.0)
            indicators[..., j] = np.where(ok, np.hypot(gx, gy) / area, np.inf)
            usable[..., j] = ok

        # (eps + gamma_j)^-r rescaled by the smallest indicator to stay in range
        best = np.min(indicators, axis=-1, keepdims=True)
        raw = np.where(usable, ((WENO_EPS + best) / (WENO_EPS + indicators)) ** WENO_POWER, 0.0)
    total = raw.sum(axis=-1, keepdims=True)
    weights = np.divide(raw, total, out=np.zeros_like(raw), where=total > 0)

    stranded = ~usable.any(axis=-1)
    if warn and stranded.any():
        logger.warning("{0:d} subcell(s) without a usable WENO stencil; zero gradient used".format(
            int(stranded.sum())))
    grad = np.einsum('nij,nijc->nic', weights, fits)
    return WenoGradient(grad, weights, indicators, stranded)


class SubcellScheme(object):
    """
    Right-hand side of the subcell means of troubled elements.

    Parameters
    ----------
    space: DGSpace
    fv_order: int
        2 extrapolates sub-edge traces with the WENO gradient, 1 keeps them piecewise constant
    frozen: ndarray (K,) of bool, optional
        Elements whose faces are closed like domain boundary faces
    """
    def __init__(self, space, fv_order=2, frozen=None, logger=None):
        if fv_order not in (1, 2):
            raise ValueError("fv_order must be 1 or 2, got {0}".format(fv_order))
        self.space = space
        self.fv_order = fv_order
        self.frozen = np.zeros(space.K, dtype=bool) if frozen is None else np.asarray(frozen, dtype=bool)
        self.logger = logger or logging.getLogger(__name__)
        self._warned = False

    def traces(self, means, nodal, troubled, owners):
        """Sub-edge trace values of the owners' subcells, shape (n, Ns, 3)."""
        sp = self.space
        own_mean = means[owners]
        if self.fv_order == 1:
            return np.repeat(own_mean[..., None], 3, axis=-1)
        weno = weno_gradient(means, nodal, troubled, sp, owners, self.frozen, warn=not self._warned,
                             logger=self.logger)
        self._warned = self._warned or bool(weno.stranded.any())
        offset = sp.sub_midpoints[owners] - sp.sub_centroids[owners][:, :, None, :]
        return own_mean[..., None] + np.einsum('nic,nikc->nik', weno.grad, offset)

    def interfaces(self, troubled):
        """(fv_elem, fv_face, dg_elem, dg_face) of every face between an FV and an active DG element."""
        mesh = self.space.mesh
        nbr = mesh.EToE
        fv_face = troubled[:, None] & ~troubled[nbr] & ~self.frozen[nbr] & ~mesh.boundary_flags
        fv_elem, face = np.nonzero(fv_face)
        return fv_elem, face, nbr[fv_elem, face], mesh.EToF[fv_elem, face]

    def rhs(self, means, nodal, troubled):
        """
        Time derivative of the owners' means and the coupled fluxes handed to
        the neighboring DG elements.

        Returns
        ----------
        owners: ndarray
        dmeans: ndarray (n, Ns)
        override: FluxOverride
        """
        sp = self.space
        sg = sp.sg
        owners = np.flatnonzero(troubled)
        trace = np.zeros(means.shape + (3,))
        trace[owners] = self.traces(means, nodal, troubled, owners)

        kind = sp.slot_kind[owners]
        inner = trace[owners]
        outer = trace[sp.slot_elem[owners], sp.slot_cell[owners], sp.slot_edge[owners]]
        closed = (kind == BOUNDARY) | closed_slots(kind, sp.slot_elem[owners], self.frozen)
        outer = np.where(closed, inner, outer)
        nx = sp.sub_normals[owners][..., 0]
        ny = sp.sub_normals[owners][..., 1]
        fluxes = np.stack([np.where(nx >= 0, inner, outer),
                           np.where(ny >= 0, inner, outer),
                           np.where(nx >= 0, outer, inner),
                           np.where(ny >= 0, outer, inner)])

        override = FluxOverride(np.zeros((sp.K, 3), dtype=bool),
                                np.zeros((4, sp.K, 3, sp.re.Nfp)))
        fv_elem, fv_face, dg_elem, dg_face = self.interfaces(troubled)
        if fv_elem.size:
            fv_trace = trace[fv_elem[:, None], sg.face_segment_cell[fv_face],
                             sg.face_segment_edge[fv_face]]
            dg_trace = sp.face_values(nodal)[dg_elem, dg_face]
            normal = sp.geom.n[fv_elem, fv_face]
            coupled = couple_faces(dg_trace, fv_trace, normal, sg.Pf[dg_face], sg.Rf[dg_face])

            # scatter the FV-side fluxes into the owners' slots
            slot = np.full((sp.K, 3), -1, dtype=np.int64)
            slot[fv_elem, fv_face] = np.arange(fv_elem.size)
            iface = slot[owners[:, None, None], sp.slot_face[owners]]
            coupled_slot = (kind == MACRO) & (iface >= 0)
            picked = coupled.fv_flux[:, np.maximum(iface, 0), sp.slot_segment[owners]]
            fluxes = np.where(coupled_slot[None], picked, fluxes)

            override.mask[dg_elem, dg_face] = True
            override.values[:, dg_elem, dg_face] = coupled.dg_flux

        weight = sp.sub_edge_lengths[owners] / sp.sub_areas[owners][..., None]
        p = np.stack([(fluxes[0] * nx * weight).sum(axis=-1), (fluxes[1] * ny * weight).sum(axis=-1)])
        q = np.stack([(fluxes[2] * nx * weight).sum(axis=-1), (fluxes[3] * ny * weight).sum(axis=-1)])
        dmeans = -llf_hamiltonian(GradientPair(p, q))
        return owners, dmeans, override


def fv_rhs(means, nodal, troubled, space, fv_order=2, frozen=None):
    """Functional form of SubcellScheme.rhs."""
    return SubcellScheme(space, fv_order, frozen).rhs(means, nodal, troubled)
