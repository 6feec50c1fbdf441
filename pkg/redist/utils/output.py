"""
Field and operator output: VTK through meshio, nodal CSV tables and ASCII operator dumps.
"""
import os.path as osp
import numpy as np
import pandas as pd
import meshio

from ..discretization.subgrid import structured_simplex_pattern
from .config_utils import mkdir_or_exist


def _check_field(name, values, space):
    values = np.asarray(values, dtype=float)
    if values.shape == (space.K,):
        values = np.repeat(values[:, None], space.re.Np, axis=1)
    if values.shape != (space.K, space.re.Np):
        raise ValueError("Field '{0}' has shape {1}, expected ({2}, {3}) or ({2},)".format(
            name, values.shape, space.K, space.re.Np))
    return values


def write_vtk(filename, space, fields):
    """
    Unstructured triangle grid written with meshio (legacy ASCII VTK). Every
    element contributes its own Np points (discontinuous field) and N^2
    linear sub-triangles on its node lattice.

    Parameters
    ----------
    fields: dict
        name -> nodal array (K, Np) or per-element array (K,), replicated to nodes
    """
    K, Np = space.K, space.re.Np
    sub = structured_simplex_pattern(space.N)
    cells = (np.arange(K)[:, None, None] * Np + sub[None]).reshape(-1, 3)
    points = np.column_stack([space.x.ravel(), space.y.ravel(), np.zeros(K * Np)])
    data = {name: _check_field(name, values, space).ravel() for name, values in fields.items()}

    mesh = meshio.Mesh(points, [('triangle', cells)], point_data=data)
    try:
        mesh.write(filename, file_format='vtk', binary=False)
    except OSError as e:
        raise IOError("Could not write VTK file {0}: {1}".format(filename, e))
    return filename


def write_nodal_csv(filename, space, fields):
    """One row per node: element, local node, x, y and every field."""
    K, Np = space.K, space.re.Np
    table = {'element': np.repeat(np.arange(K), Np),
             'node': np.tile(np.arange(Np), K),
             'x': space.x.ravel(),
             'y': space.y.ravel()}
    for name, values in fields.items():
        table[name] = _check_field(name, values, space).ravel()
    pd.DataFrame(table).to_csv(filename, index=False, float_format='%.16e')
    return filename


def dump_operators(directory, space):
    """ASCII dumps of the reference operators of one space; returns the written paths."""
    mkdir_or_exist(directory)
    operators = space.re.operators()
    operators.update(space.sg.operators())
    paths = []
    for name, matrix in operators.items():
        path = osp.join(directory, 'N{0:d}_{1}.txt'.format(space.N, name))
        np.savetxt(path, np.atleast_2d(matrix), fmt='%.16e')
        paths.append(path)
    return paths
