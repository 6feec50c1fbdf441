"""
LDG discretization of |grad phi| on nodal elements.

One-sided gradients p (left-biased) and q (right-biased) are formed in strong
form, p = D phi + sum_f L_f (Fscale n_i (phi*_p - phi^-)), where the trace
phi*_p takes the interior value if n_i >= 0 and the exterior one otherwise;
q uses the opposite choice. The local Lax-Friedrichs Hamiltonian combines them.
"""
import numpy as np


DELTA = 1e-10


class GradientPair(object):
    """
    Left- and right-biased gradients, each stacked as (2, ...) with x then y.
    """
    def __init__(self, p, q):
        self.p = p
        self.q = q

    @property
    def mean(self):
        return 0.5 * (self.p + self.q)


class FluxOverride(object):
    """
    Face fluxes replacing the native upwind choice on selected faces.

    Parameters
    ----------
    mask: ndarray (K, 3) of bool
    values: ndarray (4, K, 3, Nfp)
        phi*_p for x and y, then phi*_q for x and y
    """
    def __init__(self, mask, values):
        self.mask = mask
        self.values = values


def closed_faces(space, frozen):
    """Faces (K, 3) whose neighbor is frozen; they are treated like domain boundary faces."""
    if frozen is None:
        return None
    frozen = np.asarray(frozen, dtype=bool)
    return frozen[space.mesh.EToE] & ~space.mesh.boundary_flags


def trace_fluxes(field, space, override=None, closed=None):
    """Alternating upwind traces (phi*_px, phi*_py, phi*_qx, phi*_qy), each (K, 3, Nfp)."""
    inner = space.face_values(field)
    outer = space.exterior_values(field)
    if closed is not None:
        outer = np.where(closed[:, :, None], inner, outer)
    nx = space.geom.nx[:, :, None]
    ny = space.geom.ny[:, :, None]
    fluxes = np.stack([np.where(nx >= 0, inner, outer),
                       np.where(ny >= 0, inner, outer),
                       np.where(nx >= 0, outer, inner),
                       np.where(ny >= 0, outer, inner)])
    if override is not None:
        fluxes = np.where(override.mask[None, :, :, None], override.values, fluxes)
    return fluxes, inner


def ldg_gradients(field, space, override=None, closed=None):
    """
    LDG gradients of a nodal field (K, Np).

    Domain-boundary faces and `closed` faces see their own trace as exterior
    value, so the jump vanishes there. `override` supplies coupled fluxes on
    faces bordering subcell-limited elements.
    """
    re, geom = space.re, space.geom
    fluxes, inner = trace_fluxes(field, space, override, closed)
    dr = field @ re.Dr.T
    ds = field @ re.Ds.T
    phix = geom.rx[:, None] * dr + geom.sx[:, None] * ds
    phiy = geom.ry[:, None] * dr + geom.sy[:, None] * ds

    fscale = geom.Fscale[:, :, None]
    normals = (geom.nx[:, :, None], geom.ny[:, :, None])
    lifted = [np.einsum('fnj,kfj->kn', re.lift, fscale * normals[c % 2] * (fluxes[c] - inner))
              for c in range(4)]
    p = np.stack([phix + lifted[0], phiy + lifted[1]])
    q = np.stack([phix + lifted[2], phiy + lifted[3]])
    return GradientPair(p, q)


def dissipation_coefficients(gp):
    """
    alpha_i = elementwise max of |g_i| / |g| with g = (p+q)/2; nodes with
    |g| < DELTA contribute the bound 1. Reduced over the last axis.
    """
    g = gp.mean
    norm = np.hypot(g[0], g[1])
    flat = norm < DELTA
    ratio = np.abs(g) / np.maximum(norm, DELTA)[None]
    ratio = np.where(flat[None], 1.0, ratio)
    alpha = ratio.max(axis=-1)
    assert (alpha >= 0).all()
    return alpha


def llf_hamiltonian(gp):
    """
    Local Lax-Friedrichs Hamiltonian
    |(p+q)/2| - (alpha_1/2)(q_1 - p_1) - (alpha_2/2)(q_2 - p_2).
    """
    g = gp.mean
    alpha = dissipation_coefficients(gp)[..., None]
    return (np.hypot(g[0], g[1])
            - 0.5 * alpha[0] * (gp.q[0] - gp.p[0])
            - 0.5 * alpha[1] * (gp.q[1] - gp.p[1]))


def dg_rhs(field, space, troubled=None, frozen=None, override=None):
    """
    d(field)/dt = -H(p, q) on DG elements; zero on troubled and frozen elements.
    Faces toward frozen elements are closed.
    """
    rhs = -llf_hamiltonian(ldg_gradients(field, space, override, closed_faces(space, frozen)))
    idle = np.zeros(space.K, dtype=bool)
    if troubled is not None:
        idle |= troubled
    if frozen is not None:
        idle |= frozen
    rhs[idle] = 0.0
    return rhs
