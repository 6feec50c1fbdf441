"""
Mesh files: the native text format plus anything meshio reads (Gmsh, VTK, ...).

Native format::

    # optional comment lines
    NV K
    x y          (NV lines)
    v0 v1 v2     (K lines, 0-based vertex ids)
"""
import logging
import os.path as osp
import numpy as np
import meshio

from ..discretization.mesh import Mesh, orient_elements, build_connectivity
from .config_utils import check_file_exist


NATIVE_EXTENSIONS = ('.mesh', '.txt', '.dat')


def _data_lines(filename):
    with open(filename, 'r') as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith('#'):
                yield line


def read_native(filename):
    """Vertices (NV, 2) and elements (K, 3) of a native mesh file."""
    check_file_exist(filename)
    lines = _data_lines(filename)
    try:
        nv, k = (int(tok) for tok in next(lines).split()[:2])
        vertices = np.array([[float(tok) for tok in next(lines).split()[:2]] for _ in range(nv)])
        elements = np.array([[int(tok) for tok in next(lines).split()[:3]] for _ in range(k)],
                            dtype=np.int64)
    except (StopIteration, ValueError) as e:
        raise ValueError("Malformed native mesh file {0}: {1}".format(filename, e))
    if elements.size and (elements.min() < 0 or elements.max() >= nv):
        raise ValueError("Element vertex id out of range in {0}".format(filename))
    return vertices.reshape(-1, 2), elements.reshape(-1, 3)


def write_native(filename, mesh):
    with open(filename, 'w') as f:
        f.write("# redist mesh\n")
        f.write("{0:d} {1:d}\n".format(mesh.NV, mesh.K))
        np.savetxt(f, mesh.vertices, fmt='%.17g')
        np.savetxt(f, mesh.elements, fmt='%d')
    return filename


def read_triangles(filename, logger=None):
    """
    Triangles of any mesh file meshio understands. Other cell types are
    skipped with a warning; the z coordinate is dropped.
    """
    logger = logger or logging.getLogger(__name__)
    check_file_exist(filename)
    try:
        data = meshio.read(filename)
    except (meshio.ReadError, ValueError) as e:
        raise ValueError("Could not read mesh file {0}: {1}".format(filename, e))

    triangles = []
    skipped = {}
    for block in data.cells:
        if block.type == 'triangle':
            triangles.append(np.asarray(block.data, dtype=np.int64))
        else:
            skipped[block.type] = skipped.get(block.type, 0) + len(block.data)
    for cell_type, count in sorted(skipped.items()):
        logger.warning("Skipped {0:d} '{1}' cell(s) in {2}".format(count, cell_type, filename))
    if not triangles:
        raise ValueError("No triangles found in {0}".format(filename))
    return np.asarray(data.points, dtype=float)[:, :2], np.concatenate(triangles)


def load_mesh(filename, logger=None):
    """Read, orient and connect a mesh file (native for .mesh/.txt/.dat, meshio otherwise)."""
    logger = logger or logging.getLogger(__name__)
    filename = osp.abspath(osp.expanduser(filename))
    if filename.lower().endswith(NATIVE_EXTENSIONS):
        vertices, elements = read_native(filename)
    else:
        vertices, elements = read_triangles(filename, logger)
    elements = orient_elements(vertices, elements, logger)
    mesh = Mesh(vertices, elements)
    build_connectivity(mesh)
    logger.info("Loaded mesh {0}: K={1:d}, NV={2:d}".format(filename, mesh.K, mesh.NV))
    return mesh
