import logging
import numpy as np


"""
############################## Mesh ##############################
"""

class Mesh(object):
    """
    Conforming straight-sided triangle mesh.

    Face f of an element joins its local vertices f and (f+1) % 3. Elements
    are stored counterclockwise; connectivity is filled by build_connectivity.

    Parameters
    ----------
    vertices: array_like
        Vertex coordinates, shape (NV, 2)
    elements: array_like
        Vertex triplets, shape (K, 3)
    target_edge: float, optional
        Nominal edge length of a generated mesh (halved on refinement)
    """
    def __init__(self, vertices, elements, target_edge=None):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
        self.elements = np.asarray(elements, dtype=np.int64).reshape(-1, 3)
        self.target_edge = target_edge
        self.EToE = None
        self.EToF = None
        self.boundary_flags = None

    @property
    def K(self):
        return self.elements.shape[0]

    @property
    def NV(self):
        return self.vertices.shape[0]

    def element_vertices(self):
        """Vertex coordinates per element, shape (K, 3, 2)."""
        return self.vertices[self.elements]

    def signed_areas(self):
        return signed_areas(self.vertices, self.elements)

    def face_lengths(self):
        xy = self.element_vertices()
        return np.linalg.norm(np.roll(xy, -1, axis=1) - xy, axis=2)

    def inradius(self):
        return 2.0 * self.signed_areas() / self.face_lengths().sum(axis=1)

    def characteristic_length(self):
        if self.target_edge is not None:
            return float(self.target_edge)
        return float(np.median(self.face_lengths()))

    def face_keys(self):
        """Sorted vertex pairs of every element face, shape (3K, 2)."""
        faces = np.stack([self.elements[:, [0, 1]], self.elements[:, [1, 2]],
                          self.elements[:, [2, 0]]], axis=1)
        return np.sort(faces.reshape(-1, 2), axis=1)

    def boundary_edge_count(self):
        return int(self.boundary_flags.sum())

    def interior_face_count(self):
        return int((~self.boundary_flags).sum()) // 2


def signed_areas(vertices, elements):
    xy = vertices[elements]
    d1 = xy[:, 1] - xy[:, 0]
    d2 = xy[:, 2] - xy[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def orient_elements(vertices, elements, logger=None):
    """
    Flip negatively oriented triangles to counterclockwise order.

    Raises
    ----------
    ValueError
        If any triangle has (numerically) zero area
    """
    logger = logger or logging.getLogger(__name__)
    elements = np.array(elements, dtype=np.int64).reshape(-1, 3)
    areas = signed_areas(vertices, elements)
    extent = np.ptp(vertices, axis=0).max() if len(vertices) else 0.0
    degenerate = np.abs(areas) <= 1e-14 * max(extent, 1.0) ** 2
    if degenerate.any():
        raise ValueError("Zero-area element(s): {0}".format(np.flatnonzero(degenerate)[:10].tolist()))
    flipped = areas < 0
    if flipped.any():
        elements[flipped] = elements[flipped][:, [0, 2, 1]]
        logger.debug("Reoriented {0:d} clockwise elements".format(int(flipped.sum())))
    return elements


def build_connectivity(mesh):
    """
    Fill EToE, EToF and boundary_flags. Boundary faces point back to themselves.

    Raises
    ----------
    ValueError
        If an edge is shared by more than two triangles
    """
    K = mesh.K
    keys = mesh.face_keys()
    uniq, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    if (counts > 2).any():
        bad = uniq[counts > 2]
        raise ValueError("Non-manifold edge(s) shared by more than two elements: {0}".format(
            bad[:10].tolist()))

    order = np.argsort(inverse, kind='stable')
    sorted_ids = inverse[order]
    same = sorted_ids[:-1] == sorted_ids[1:]
    first = order[:-1][same]
    second = order[1:][same]

    etoe = np.repeat(np.arange(K)[:, None], 3, axis=1)
    etof = np.tile(np.arange(3), (K, 1))
    flat_e = etoe.reshape(-1)
    flat_f = etof.reshape(-1)
    flat_e[first] = second // 3
    flat_f[first] = second % 3
    flat_e[second] = first // 3
    flat_f[second] = first % 3

    mesh.EToE = etoe
    mesh.EToF = etof
    mesh.boundary_flags = etoe == np.arange(K)[:, None]
    return mesh


def generate_square_mesh(half_width, target_edge, logger=None):
    """
    Structured-split triangulation of [-L, L]^2.

    The square is cut into n x n cells with n = 2L/h. Cells with
    (i + j) % 5 == 4 are split into four triangles around their center, the
    others into two along alternating diagonals (which run through the domain
    corners when n is even). L=2, h=0.4 gives 240 triangles.

    Parameters
    ----------
    half_width: float
        L, half the side of the square
    target_edge: float
        h, the boundary edge length; 2L/h must be an integer
    """
    logger = logger or logging.getLogger(__name__)
    if half_width <= 0:
        raise ValueError("half_width must be positive, got {0}".format(half_width))
    if target_edge <= 0 or target_edge > 2.0 * half_width:
        raise ValueError("target_edge must lie in (0, 2L], got {0}".format(target_edge))
    ncell = int(round(2.0 * half_width / target_edge))
    if abs(ncell * target_edge - 2.0 * half_width) > 1e-9 * half_width:
        raise ValueError("2L/h must be an integer (L={0}, h={1})".format(half_width, target_edge))

    coords = np.linspace(-half_width, half_width, ncell + 1)
    gx, gy = np.meshgrid(coords, coords, indexing='xy')
    vertices = [np.column_stack([gx.ravel(), gy.ravel()])]
    centers = []
    elements = []

    def vid(i, j):
        return j * (ncell + 1) + i

    n_grid = (ncell + 1) ** 2
    for j in range(ncell):
        for i in range(ncell):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if (i + j) % 5 == 4:
                m = n_grid + len(centers)
                centers.append([0.5 * (coords[i] + coords[i + 1]), 0.5 * (coords[j] + coords[j + 1])])
                elements.extend([(a, b, m), (b, c, m), (c, d, m), (d, a, m)])
            elif (i + j) % 2 == 0:
                elements.extend([(a, b, c), (a, c, d)])
            else:
                elements.extend([(a, b, d), (b, c, d)])
    if centers:
        vertices.append(np.array(centers))

    mesh = Mesh(np.vstack(vertices), np.array(elements), target_edge=target_edge)
    build_connectivity(mesh)
    logger.debug("Generated square mesh L={0}, h={1}: K={2:d}, NV={3:d}".format(
        half_width, target_edge, mesh.K, mesh.NV))
    return mesh


def refine_uniform(mesh):
    """Split every triangle into four congruent children through its edge midpoints."""
    keys = mesh.face_keys()
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(mesh.K, 3)
    midpoints = 0.5 * (mesh.vertices[uniq[:, 0]] + mesh.vertices[uniq[:, 1]])
    mid = mesh.NV + inverse

    v = mesh.elements
    children = np.stack([
        np.column_stack([v[:, 0], mid[:, 0], mid[:, 2]]),
        np.column_stack([mid[:, 0], v[:, 1], mid[:, 1]]),
        np.column_stack([mid[:, 2], mid[:, 1], v[:, 2]]),
        np.column_stack([mid[:, 0], mid[:, 1], mid[:, 2]]),
    ], axis=1).reshape(-1, 3)

    target = None if mesh.target_edge is None else 0.5 * mesh.target_edge
    refined = Mesh(np.vstack([mesh.vertices, midpoints]), children, target_edge=target)
    return build_connectivity(refined)


"""
############################## Geometry ##############################
"""

class GeometricFactors(object):
    """
    Affine geometric factors of every element.

    rx, sx, ry, sy and J are constant per element (shape (K,)); the surface
    Jacobian sJ (face length / 2, the face parameter spans [-1, 1]) and the
    unit outward normal (nx, ny) are per face (shape (K, 3)).
    """
    def __init__(self, rx, sx, ry, sy, J, nx, ny, sJ):
        self.rx = rx
        self.sx = sx
        self.ry = ry
        self.sy = sy
        self.J = J
        self.nx = nx
        self.ny = ny
        self.sJ = sJ

    @property
    def G(self):
        return np.stack([np.stack([self.rx, self.sx], axis=-1),
                         np.stack([self.ry, self.sy], axis=-1)], axis=-2)

    @property
    def Jf(self):
        return self.sJ

    @property
    def n(self):
        return np.stack([self.nx, self.ny], axis=-1)

    @property
    def Fscale(self):
        return self.sJ / self.J[:, None]


def compute_geometry(mesh):
    xy = mesh.element_vertices()
    x0, x1, x2 = xy[:, 0, 0], xy[:, 1, 0], xy[:, 2, 0]
    y0, y1, y2 = xy[:, 0, 1], xy[:, 1, 1], xy[:, 2, 1]
    xr, xs = 0.5 * (x1 - x0), 0.5 * (x2 - x0)
    yr, ys = 0.5 * (y1 - y0), 0.5 * (y2 - y0)
    J = xr * ys - xs * yr
    if (J <= 0).any():
        raise ValueError("Non-positive Jacobian in element(s) {0}".format(
            np.flatnonzero(J <= 0)[:10].tolist()))

    nx = np.column_stack([yr, ys - yr, -ys])
    ny = np.column_stack([-xr, xr - xs, xs])
    sJ = np.hypot(nx, ny)
    return GeometricFactors(rx=ys / J, sx=-yr / J, ry=-xs / J, sy=xr / J, J=J,
                            nx=nx / sJ, ny=ny / sJ, sJ=sJ)


def map_to_physical(mesh, r, s):
    """Physical coordinates of reference points (r, s) in every element, shapes (K, len(r))."""
    xy = mesh.element_vertices()
    r = np.asarray(r, dtype=float)[None, :]
    s = np.asarray(s, dtype=float)[None, :]
    x = 0.5 * (-(r + s) * xy[:, 0, 0:1] + (1.0 + r) * xy[:, 1, 0:1] + (1.0 + s) * xy[:, 2, 0:1])
    y = 0.5 * (-(r + s) * xy[:, 0, 1:2] + (1.0 + r) * xy[:, 1, 1:2] + (1.0 + s) * xy[:, 2, 1:2])
    return x, y
