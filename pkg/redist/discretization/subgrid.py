"""
Subcell tessellation of the reference triangle.

The order-(N+1) warp & blend lattice is cut into (N+1)^2 sub-triangles. P maps
nodal DG values to subcell means, Pf maps DG face values to the means over the
N+1 sub-edges of a macro face, and R / Rf go back.
"""
import numpy as np
from scipy import linalg

from .refelem import (warp_blend_nodes, lattice_index, triangle_quadrature, face_parameter,
                      vandermonde_1d, gauss_legendre)


INTERNAL = 0
MACRO = 1


def structured_simplex_pattern(order):
    """
    Sub-triangles of the order-`order` node lattice, counterclockwise, shape (order^2, 3).
    """
    index = lattice_index(order)
    triangles = []
    for j in range(order):
        for i in range(order - j):
            triangles.append((index(i, j), index(i + 1, j), index(i, j + 1)))
            if i < order - j - 1:
                triangles.append((index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)))
    return np.array(triangles, dtype=np.int64)


def lattice_face_nodes(order):
    """Lattice node ids along each macro face, counterclockwise, shape (3, order+1)."""
    index = lattice_index(order)
    face0 = [index(i, 0) for i in range(order + 1)]
    face1 = [index(order - j, j) for j in range(order + 1)]
    face2 = [index(0, j) for j in range(order, -1, -1)]
    return np.array([face0, face1, face2], dtype=np.int64)


class SubcellGrid(object):
    """
    Reference subcell tessellation and its operators.

    Subcell edge k runs from vertex k to vertex (k+1) % 3. For every edge,
    `neighbor`/`neighbor_edge` name the adjacent subcell (or -1), and
    `macro_face`/`macro_segment` name the macro face and its sub-edge index
    counted counterclockwise from the face start (or -1).
    """
    def __init__(self, N):
        self.N = N
        self.order = N + 1
        self.Ns = (N + 1) ** 2
        self.lattice_r, self.lattice_s = warp_blend_nodes(self.order)
        self.sub_elements = structured_simplex_pattern(self.order)
        self.face_nodes = lattice_face_nodes(self.order)

        xy = np.stack([self.lattice_r, self.lattice_s], axis=-1)[self.sub_elements]
        d1 = xy[:, 1] - xy[:, 0]
        d2 = xy[:, 2] - xy[:, 0]
        self.sub_areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        if (self.sub_areas <= 0).any():
            raise ValueError("Negatively oriented subcells for N={0:d}".format(N))
        self.sub_centroids = xy.mean(axis=1)
        edges = np.roll(xy, -1, axis=1) - xy
        self.sub_edge_lengths = np.linalg.norm(edges, axis=2)
        self.sub_normals = np.stack([edges[..., 1], -edges[..., 0]], axis=-1) \
            / self.sub_edge_lengths[..., None]

        self._build_topology()
        self.P = None
        self.Pf = None
        self.R = None
        self.Rf = None

    def _build_topology(self):
        Ns = self.Ns
        self.neighbor = np.full((Ns, 3), -1, dtype=np.int64)
        self.neighbor_edge = np.full((Ns, 3), -1, dtype=np.int64)
        self.macro_face = np.full((Ns, 3), -1, dtype=np.int64)
        self.macro_segment = np.full((Ns, 3), -1, dtype=np.int64)
        self.face_segment_cell = np.zeros((3, self.order), dtype=np.int64)
        self.face_segment_edge = np.zeros((3, self.order), dtype=np.int64)

        owners = {}
        for cell, tri in enumerate(self.sub_elements):
            for k in range(3):
                key = tuple(sorted((tri[k], tri[(k + 1) % 3])))
                owners.setdefault(key, []).append((cell, k))

        segments = {}
        for face in range(3):
            nodes = self.face_nodes[face]
            for seg in range(self.order):
                segments[tuple(sorted((nodes[seg], nodes[seg + 1])))] = (face, seg)

        for key, sides in owners.items():
            if len(sides) == 2:
                (c0, k0), (c1, k1) = sides
                self.neighbor[c0, k0], self.neighbor_edge[c0, k0] = c1, k1
                self.neighbor[c1, k1], self.neighbor_edge[c1, k1] = c0, k0
            elif key in segments:
                cell, k = sides[0]
                face, seg = segments[key]
                self.macro_face[cell, k] = face
                self.macro_segment[cell, k] = seg
                self.face_segment_cell[face, seg] = cell
                self.face_segment_edge[face, seg] = k
            else:
                raise ValueError("Dangling sub-edge {0} in tessellation".format(key))

    @property
    def slot_kind(self):
        return np.where(self.macro_face >= 0, MACRO, INTERNAL)

    def operators(self):
        ops = {'P': self.P, 'R': self.R}
        for face in range(3):
            ops['Pf{0:d}'.format(face)] = self.Pf[face]
            ops['Rf{0:d}'.format(face)] = self.Rf[face]
        return ops


def build_subcell_tessellation(N):
    return SubcellGrid(N)


def build_projection(re, sg):
    """
    Subcell-mean projection P (Ns x Np) and face projection Pf (3, N+1, N+1).

    Both use Gauss rules exact for degree N, so they are exact on the DG space.
    """
    N = re.N
    qr, qs, qw = triangle_quadrature(N)
    lattice = np.stack([sg.lattice_r, sg.lattice_s], axis=-1)
    P = np.zeros((sg.Ns, re.Np))
    for cell, tri in enumerate(sg.sub_elements):
        v0, v1, v2 = lattice[tri]
        pts = v0 + np.outer(0.5 * (qr + 1.0), v1 - v0) + np.outer(0.5 * (qs + 1.0), v2 - v0)
        P[cell] = 0.5 * qw @ re.interpolation_matrix(pts[:, 0], pts[:, 1])

    xi, wi = gauss_legendre(N // 2 + 1)
    Pf = np.zeros((3, N + 1, N + 1))
    for face in range(3):
        nodes = sg.face_nodes[face]
        t_lattice = face_parameter(face, sg.lattice_r[nodes], sg.lattice_s[nodes])
        vinv = linalg.inv(vandermonde_1d(N, re.face_coords[face]))
        for seg in range(N + 1):
            ta, tb = t_lattice[seg], t_lattice[seg + 1]
            tq = ta + 0.5 * (xi + 1.0) * (tb - ta)
            Pf[face, seg] = 0.5 * wi @ (vandermonde_1d(N, tq) @ vinv)
    return P, Pf


def build_reconstruction(P, sg, re):
    """
    Area-weighted least-squares reconstruction R (Np x Ns) constrained to keep
    the macro mean, solved once through its KKT system, and Rf = Pf^-1.
    """
    a = sg.sub_areas
    Np = P.shape[1]
    kkt = np.zeros((Np + 1, Np + 1))
    kkt[:Np, :Np] = P.T @ (a[:, None] * P)
    kkt[:Np, Np] = P.T @ a
    kkt[Np, :Np] = P.T @ a
    rhs = np.vstack([P.T * a[None, :], a[None, :]])
    try:
        R = linalg.solve(kkt, rhs)[:Np]
        Rf = np.stack([linalg.inv(sg.Pf[face]) for face in range(3)])
    except linalg.LinAlgError as err:
        raise ValueError("Singular reconstruction system for N={0:d}".format(re.N)) from err
    return R, Rf


def build_subcell_grid(re):
    sg = build_subcell_tessellation(re.N)
    sg.P, sg.Pf = build_projection(re, sg)
    sg.R, sg.Rf = build_reconstruction(sg.P, sg, re)
    return sg
