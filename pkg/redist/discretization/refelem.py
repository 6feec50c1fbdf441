"""
Nodal reference element on the bi-unit triangle (-1,-1), (1,-1), (-1,1).

Builds the warp & blend node family, the orthonormal modal basis on the
triangle, and the dense operator set shared by every element: Vandermonde,
mass, derivative and per-face lift matrices.
"""
import numpy as np
from scipy import linalg
from scipy.special import eval_jacobi, gammaln, roots_jacobi, roots_legendre


"""
############################## Global Arguments ##############################
"""
# Optimised blending parameters of the warp & blend node family, orders 1..15.
ALPHA_OPT = np.array([0.0000, 0.0000, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999,
                      1.2832, 1.3648, 1.4773, 1.4959, 1.5743, 1.5770, 1.6223,
                      1.6258])
MAX_ORDER = 15
FACE_TOL = 1e-10


"""
############################## 1D building blocks ##############################
"""

def jacobi_p(x, alpha, beta, n):
    """
    Orthonormal Jacobi polynomial of degree n on [-1, 1] with weight
    (1-x)^alpha (1+x)^beta.
    """
    x = np.asarray(x, dtype=float)
    log_norm = ((alpha + beta + 1) * np.log(2.0) - np.log(2 * n + alpha + beta + 1)
                + gammaln(n + alpha + 1) + gammaln(n + beta + 1)
                - gammaln(n + alpha + beta + 1) - gammaln(n + 1))
    return eval_jacobi(n, alpha, beta, x) / np.exp(0.5 * log_norm)


def grad_jacobi_p(x, alpha, beta, n):
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.zeros_like(x)
    return np.sqrt(n * (n + alpha + beta + 1)) * jacobi_p(x, alpha + 1, beta + 1, n - 1)


def jacobi_gauss_lobatto(alpha, beta, n):
    """Gauss-Lobatto points of order n (n+1 points including both endpoints)."""
    if n == 1:
        return np.array([-1.0, 1.0])
    interior = roots_jacobi(n - 1, alpha + 1, beta + 1)[0]
    return np.concatenate(([-1.0], np.sort(interior), [1.0]))


def vandermonde_1d(n, x):
    x = np.asarray(x, dtype=float)
    return np.stack([jacobi_p(x, 0, 0, j) for j in range(n + 1)], axis=-1)


def mass_1d(n, x):
    """1D mass matrix of the Lagrange basis on nodes x over the parameter interval [-1, 1]."""
    v = vandermonde_1d(n, x)
    return linalg.inv(v @ v.T)


def gauss_legendre(n):
    return roots_legendre(n)


def warp_factor(n, rout):
    """Warp of the equidistant 1D nodes onto Gauss-Lobatto nodes, evaluated at rout."""
    rout = np.asarray(rout, dtype=float)
    lgl = jacobi_gauss_lobatto(0, 0, n)
    req = np.linspace(-1.0, 1.0, n + 1)
    veq = vandermonde_1d(n, req)
    pmat = np.stack([jacobi_p(rout, 0, 0, i) for i in range(n + 1)])
    lmat = np.linalg.solve(veq.T, pmat)
    warp = lmat.T @ (lgl - req)
    inner = (np.abs(rout) < 1.0 - 1e-10).astype(float)
    scale = 1.0 - (inner * rout) ** 2
    return warp / scale + warp * (inner - 1.0)


"""
############################## Nodes and modal basis ##############################
"""

def _xy_to_rs(x, y):
    l1 = (np.sqrt(3.0) * y + 1.0) / 3.0
    l2 = (-3.0 * x - np.sqrt(3.0) * y + 2.0) / 6.0
    l3 = (3.0 * x - np.sqrt(3.0) * y + 2.0) / 6.0
    return -l2 + l3 - l1, -l2 - l3 + l1


def lattice_index(order):
    """
    Index of lattice node (i, j) in the row-major node ordering used by
    warp_blend_nodes: rows run along s, positions along r.
    """
    def index(i, j):
        return j * (order + 1) - (j * (j - 1)) // 2 + i
    return index


def warp_blend_nodes(N):
    """
    Warp & blend interpolation nodes of order N on the bi-unit triangle.

    Parameters
    ----------
    N: int
        Polynomial order, 1 <= N <= 15

    Returns
    ----------
    r, s: ndarray
        (N+1)(N+2)/2 node coordinates ordered row by row (s outer, r inner)
    """
    if N < 1 or N > MAX_ORDER:
        raise ValueError("Node order must lie in [1, {0:d}], got {1}".format(MAX_ORDER, N))
    alpha = ALPHA_OPT[N - 1]
    l1, l3 = [], []
    for n in range(N + 1):
        for m in range(N + 1 - n):
            l1.append(n / N)
            l3.append(m / N)
    l1 = np.array(l1)
    l3 = np.array(l3)
    l2 = 1.0 - l1 - l3

    x = -l2 + l3
    y = (-l2 - l3 + 2.0 * l1) / np.sqrt(3.0)

    blend1 = 4.0 * l2 * l3
    blend2 = 4.0 * l1 * l3
    blend3 = 4.0 * l1 * l2
    warp1 = blend1 * warp_factor(N, l3 - l2) * (1.0 + (alpha * l1) ** 2)
    warp2 = blend2 * warp_factor(N, l1 - l3) * (1.0 + (alpha * l2) ** 2)
    warp3 = blend3 * warp_factor(N, l2 - l1) * (1.0 + (alpha * l3) ** 2)

    x = x + warp1 + np.cos(2.0 * np.pi / 3.0) * warp2 + np.cos(4.0 * np.pi / 3.0) * warp3
    y = y + np.sin(2.0 * np.pi / 3.0) * warp2 + np.sin(4.0 * np.pi / 3.0) * warp3
    return _xy_to_rs(x, y)


def rs_to_ab(r, s):
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    a = np.full_like(r, -1.0)
    regular = np.abs(1.0 - s) > 1e-14
    a[regular] = 2.0 * (1.0 + r[regular]) / (1.0 - s[regular]) - 1.0
    return a, s.copy()


def mode_indices(N):
    """Modal (i, j) pairs in total-degree-major order."""
    return [(i, k - i) for k in range(N + 1) for i in range(k + 1)]


def simplex_2d_p(a, b, i, j):
    h1 = jacobi_p(a, 0, 0, i)
    h2 = jacobi_p(b, 2 * i + 1, 0, j)
    return np.sqrt(2.0) * h1 * h2 * (1.0 - b) ** i


def grad_simplex_2d_p(a, b, i, j):
    fa = jacobi_p(a, 0, 0, i)
    dfa = grad_jacobi_p(a, 0, 0, i)
    gb = jacobi_p(b, 2 * i + 1, 0, j)
    dgb = grad_jacobi_p(b, 2 * i + 1, 0, j)

    dmodedr = dfa * gb
    if i > 0:
        dmodedr = dmodedr * (0.5 * (1.0 - b)) ** (i - 1)

    dmodeds = dfa * (gb * (0.5 * (1.0 + a)))
    if i > 0:
        dmodeds = dmodeds * (0.5 * (1.0 - b)) ** (i - 1)
    tmp = dgb * (0.5 * (1.0 - b)) ** i
    if i > 0:
        tmp = tmp - 0.5 * i * gb * (0.5 * (1.0 - b)) ** (i - 1)
    dmodeds = dmodeds + fa * tmp

    scale = 2.0 ** (i + 0.5)
    return scale * dmodedr, scale * dmodeds


def vandermonde(N, r, s):
    a, b = rs_to_ab(r, s)
    return np.stack([simplex_2d_p(a, b, i, j) for i, j in mode_indices(N)], axis=-1)


def grad_vandermonde(N, r, s):
    a, b = rs_to_ab(r, s)
    grads = [grad_simplex_2d_p(a, b, i, j) for i, j in mode_indices(N)]
    vr = np.stack([g[0] for g in grads], axis=-1)
    vs = np.stack([g[1] for g in grads], axis=-1)
    return vr, vs


def triangle_quadrature(degree):
    """
    Collapsed-coordinate Gauss rule on the bi-unit triangle, exact for
    polynomials of total degree <= degree. Weights sum to 2.
    """
    n = degree // 2 + 1
    xa, wa = roots_jacobi(n, 0.0, 0.0)
    xb, wb = roots_jacobi(n, 1.0, 0.0)
    a, b = np.meshgrid(xa, xb, indexing='ij')
    w = 0.5 * np.outer(wa, wb)
    r = 0.5 * (1.0 + a) * (1.0 - b) - 1.0
    return r.ravel(), b.ravel(), w.ravel()


def face_parameter(face, r, s):
    """Counterclockwise 1D coordinate in [-1, 1] along reference face 0, 1 or 2."""
    if face == 0:
        return np.asarray(r, dtype=float)
    if face == 1:
        return np.asarray(s, dtype=float)
    return -np.asarray(s, dtype=float)


def on_face(face, r, s, tol=FACE_TOL):
    if face == 0:
        return np.abs(s + 1.0) < tol
    if face == 1:
        return np.abs(r + s) < tol
    return np.abs(r + 1.0) < tol


"""
############################## Reference element ##############################
"""

class ReferenceElement(object):
    """
    Order-N nodal triangle with its dense operators.

    Faces are numbered 0: v0->v1 (s=-1), 1: v1->v2 (r+s=0), 2: v2->v0 (r=-1),
    and face nodes are listed counterclockwise, so a neighbor traverses a
    shared face in reverse order.

    Parameters
    ----------
    N: int
        Polynomial order
    """
    def __init__(self, N):
        self.N = N
        self.Np = (N + 1) * (N + 2) // 2
        self.Nfp = N + 1
        self.r, self.s = warp_blend_nodes(N)
        self.modes = np.array(mode_indices(N))
        self.degree = self.modes.sum(axis=1)

        self.V = vandermonde(N, self.r, self.s)
        try:
            self.Vinv = linalg.inv(self.V)
        except linalg.LinAlgError as err:
            raise ValueError("Vandermonde matrix of order {0:d} is singular".format(N)) from err
        self.M = linalg.inv(self.V @ self.V.T)
        self.M = 0.5 * (self.M + self.M.T)
        vr, vs = grad_vandermonde(N, self.r, self.s)
        self.Dr = vr @ self.Vinv
        self.Ds = vs @ self.Vinv

        self.face_node_ids = np.zeros((3, self.Nfp), dtype=np.int64)
        self.face_coords = np.zeros((3, self.Nfp))
        for face in range(3):
            ids = np.flatnonzero(on_face(face, self.r, self.s))
            if ids.size != self.Nfp:
                raise ValueError("Face {0:d} carries {1:d} nodes, expected {2:d}".format(
                    face, ids.size, self.Nfp))
            t = face_parameter(face, self.r[ids], self.s[ids])
            order = np.argsort(t)
            self.face_node_ids[face] = ids[order]
            self.face_coords[face] = t[order]

        # face mass in the face's own [-1, 1] parameter; surface Jacobian is length / 2
        self.face_mass = np.stack([mass_1d(N, self.face_coords[face]) for face in range(3)])
        self.lift = np.zeros((3, self.Np, self.Nfp))
        minv = self.V @ self.V.T
        for face in range(3):
            emat = np.zeros((self.Np, self.Nfp))
            emat[self.face_node_ids[face], :] = self.face_mass[face]
            self.lift[face] = minv @ emat

    def interpolation_matrix(self, r, s):
        """Matrix evaluating the nodal interpolant at points (r, s)."""
        return vandermonde(self.N, r, s) @ self.Vinv

    def operators(self):
        ops = {'M': self.M, 'Dr': self.Dr, 'Ds': self.Ds, 'V': self.V}
        for face in range(3):
            ops['L{0:d}'.format(face)] = self.lift[face]
        return ops


def build_reference_element(N):
    return ReferenceElement(N)


def nodal_to_modal(re, nodal):
    """
    Coefficients of the orthonormal modal basis (total-degree-major order).

    Accepts a single element (Np,) or a stack (..., Np).
    """
    nodal = np.asarray(nodal, dtype=float)
    if nodal.shape[-1] != re.Np:
        raise ValueError("Expected {0:d} nodal values per element, got {1:d}".format(
            re.Np, nodal.shape[-1]))
    return nodal @ re.Vinv.T


def modal_to_nodal(re, modal):
    modal = np.asarray(modal, dtype=float)
    if modal.shape[-1] != re.Np:
        raise ValueError("Expected {0:d} modal values per element, got {1:d}".format(
            re.Np, modal.shape[-1]))
    return modal @ re.V.T
