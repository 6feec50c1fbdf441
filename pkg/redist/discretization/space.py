import logging
import numpy as np

from .mesh import build_connectivity, compute_geometry, map_to_physical
from .refelem import build_reference_element
from .subgrid import build_subcell_grid, INTERNAL, MACRO

BOUNDARY = 2


class DGSpace(object):
    """
    Order-N nodal DG space on a mesh, with the subcell data used by the limiter.

    Attributes
    ----------
    x, y: ndarray (K, Np)
        Physical node coordinates
    map_m, map_p: ndarray (K, 3, Nfp)
        Flat indices of interior / exterior face traces (map_p = map_m on the domain boundary)
    sub_*: ndarray
        Physical subcell geometry per element: areas (K, Ns), centroids (K, Ns, 2),
        edge lengths (K, Ns, 3), normals and midpoints (K, Ns, 3, 2)
    slot_*: ndarray (K, Ns, 3)
        Neighbor descriptor of every subcell edge: kind (internal, macro, boundary),
        neighbor element, cell and edge, and for macro edges the neighbor face and segment
    """
    def __init__(self, mesh, order, logger=None):
        self.logger = logger or logging.getLogger(__name__)
        if mesh.EToE is None:
            build_connectivity(mesh)
        self.mesh = mesh
        self.N = order
        self.re = build_reference_element(order)
        self.sg = build_subcell_grid(self.re)
        self.geom = compute_geometry(mesh)
        self.x, self.y = map_to_physical(mesh, self.re.r, self.re.s)
        self._build_face_maps()
        self._build_subcell_geometry()
        self._build_subcell_slots()
        self.logger.debug("DG space: K={0:d}, N={1:d}, Np={2:d}, Ns={3:d}".format(
            mesh.K, order, self.re.Np, self.sg.Ns))

    @property
    def K(self):
        return self.mesh.K

    @property
    def n_nodes(self):
        return self.mesh.K * self.re.Np

    def _build_face_maps(self):
        K, Np = self.mesh.K, self.re.Np
        ids = self.re.face_node_ids
        etoe, etof = self.mesh.EToE, self.mesh.EToF
        self.map_m = np.arange(K)[:, None, None] * Np + ids[None, :, :]
        map_p = etoe[:, :, None] * Np + ids[etof][:, :, ::-1]
        boundary = self.mesh.boundary_flags
        self.map_p = np.where(boundary[:, :, None], self.map_m, map_p)

        xm, ym = self.x.flat[self.map_m], self.y.flat[self.map_m]
        xp, yp = self.x.flat[self.map_p], self.y.flat[self.map_p]
        scale = max(np.ptp(self.x), np.ptp(self.y), 1.0)
        if np.max(np.hypot(xm - xp, ym - yp)) > 1e-9 * scale:
            raise ValueError("Face orientation mismatch between neighboring elements")

    def _build_subcell_geometry(self):
        sg = self.sg
        lx, ly = map_to_physical(self.mesh, sg.lattice_r, sg.lattice_s)
        xy = np.stack([lx, ly], axis=-1)[:, sg.sub_elements]
        d1 = xy[:, :, 1] - xy[:, :, 0]
        d2 = xy[:, :, 2] - xy[:, :, 0]
        self.sub_areas = 0.5 * (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0])
        self.sub_centroids = xy.mean(axis=2)
        edges = np.roll(xy, -1, axis=2) - xy
        self.sub_edge_lengths = np.linalg.norm(edges, axis=3)
        self.sub_normals = np.stack([edges[..., 1], -edges[..., 0]], axis=-1) \
            / self.sub_edge_lengths[..., None]
        self.sub_midpoints = 0.5 * (xy + np.roll(xy, -1, axis=2))

    def _build_subcell_slots(self):
        sg, mesh = self.sg, self.mesh
        K, Ns, N = mesh.K, sg.Ns, self.N
        elem = np.arange(K)[:, None, None]
        face = np.broadcast_to(np.maximum(sg.macro_face, 0), (K, Ns, 3))
        seg = np.broadcast_to(np.maximum(sg.macro_segment, 0), (K, Ns, 3))
        macro = np.broadcast_to(sg.macro_face >= 0, (K, Ns, 3))

        nbr_elem = mesh.EToE[elem, face]
        nbr_face = mesh.EToF[elem, face]
        nbr_seg = N - seg
        on_boundary = macro & (nbr_elem == elem)

        self.slot_kind = np.where(macro, np.where(on_boundary, BOUNDARY, MACRO), INTERNAL)
        self.slot_elem = np.where(macro, nbr_elem, elem)
        self.slot_cell = np.where(macro, sg.face_segment_cell[nbr_face, nbr_seg],
                                  np.maximum(sg.neighbor, 0)[None])
        self.slot_edge = np.where(macro, sg.face_segment_edge[nbr_face, nbr_seg],
                                  np.maximum(sg.neighbor_edge, 0)[None])
        self.slot_face = face
        self.slot_segment = seg
        self.slot_nbr_face = nbr_face
        self.slot_nbr_segment = nbr_seg

        # boundary slots point at themselves
        own_cell = np.broadcast_to(np.arange(Ns)[None, :, None], (K, Ns, 3))
        own_edge = np.broadcast_to(np.arange(3)[None, None, :], (K, Ns, 3))
        self.slot_cell = np.where(on_boundary, own_cell, self.slot_cell)
        self.slot_edge = np.where(on_boundary, own_edge, self.slot_edge)

        matched = self.sub_midpoints[self.slot_elem, self.slot_cell, self.slot_edge]
        gap = np.linalg.norm(matched - self.sub_midpoints, axis=-1)
        scale = max(np.ptp(self.x), np.ptp(self.y), 1.0)
        if gap.max() > 1e-9 * scale:
            raise ValueError("Subcell edges do not match across macro faces")

    def face_values(self, field):
        """Interior face traces of a nodal field, shape (K, 3, Nfp)."""
        return field[:, self.re.face_node_ids]

    def exterior_values(self, field):
        return field.reshape(-1)[self.map_p]
