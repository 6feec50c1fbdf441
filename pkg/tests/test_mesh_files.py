# Mesh files and field output
import logging
import meshio
import numpy as np
import pandas as pd
import pytest

from redist.discretization import DGSpace, generate_square_mesh
from redist.utils.mesh_files import load_mesh, read_native, write_native, read_triangles
from redist.utils.output import write_vtk, write_nodal_csv, dump_operators


GMSH_SQUARE = """$MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
3
1 1 2 99 1 1 2
2 2 2 99 1 1 2 3
3 2 2 99 1 1 4 3
$EndElements
"""


@pytest.fixture
def unit_square(tmp_path):
    path = tmp_path / "square.msh"
    path.write_text(GMSH_SQUARE)
    return load_mesh(str(path))


def test_native_round_trip(mesh240, tmp_path):
    path = str(tmp_path / "mesh240.mesh")
    write_native(path, mesh240)
    vertices, elements = read_native(path)
    np.testing.assert_array_equal(vertices, mesh240.vertices)
    np.testing.assert_array_equal(elements, mesh240.elements)
    mesh = load_mesh(path)
    assert mesh.K == 240
    assert mesh.boundary_edge_count() == 40


def test_gmsh_skips_lines_and_reorients(tmp_path, caplog):
    path = tmp_path / "square.msh"
    path.write_text(GMSH_SQUARE)
    with caplog.at_level(logging.WARNING):
        mesh = load_mesh(str(path))
    assert "Skipped 1 'line' cell(s)" in caplog.text
    assert mesh.K == 2
    assert (mesh.signed_areas() > 0).all()
    np.testing.assert_allclose(mesh.signed_areas().sum(), 1.0)


def test_malformed_native(tmp_path):
    short = tmp_path / "short.mesh"
    short.write_text("3 1\n0 0\n1 0\n")
    with pytest.raises(ValueError):
        read_native(str(short))
    bad_id = tmp_path / "bad_id.mesh"
    bad_id.write_text("# comment\n3 1\n0 0\n1 0\n0 1\n0 1 3\n")
    with pytest.raises(ValueError):
        read_native(str(bad_id))
    with pytest.raises(FileNotFoundError):
        read_native(str(tmp_path / "missing.mesh"))


def test_gmsh_without_triangles(tmp_path):
    path = tmp_path / "lines.msh"
    lines_only = GMSH_SQUARE.split("$Elements")[0] + "$Elements\n1\n1 1 2 99 1 1 2\n$EndElements\n"
    path.write_text(lines_only)
    with pytest.raises(ValueError):
        load_mesh(str(path))


def test_vtk_output(unit_square, tmp_path):
    space = DGSpace(unit_square, 1)
    path = str(tmp_path / "field.vtk")
    write_vtk(path, space, {'phi': space.x, 'troubled': np.array([0.0, 1.0])})
    written = meshio.read(path)
    assert written.points.shape == (6, 3)
    np.testing.assert_array_equal(written.cells_dict["triangle"], [[0, 1, 2], [3, 4, 5]])
    np.testing.assert_allclose(np.ravel(written.point_data["troubled"]), [0, 0, 0, 1, 1, 1])
    np.testing.assert_allclose(np.ravel(written.point_data["phi"]), space.x.ravel(), atol=1e-14)
    with pytest.raises(ValueError):
        write_vtk(path, space, {'phi': np.zeros(5)})


def test_nodal_csv(space240, tmp_path):
    path = str(tmp_path / "nodes.csv")
    write_nodal_csv(path, space240, {'phi': space240.x + space240.y})
    df = pd.read_csv(path)
    assert len(df) == space240.n_nodes
    assert list(df.columns) == ['element', 'node', 'x', 'y', 'phi']
    np.testing.assert_allclose(df['phi'], df['x'] + df['y'], atol=1e-14)


def test_dump_operators(tmp_path):
    space = DGSpace(generate_square_mesh(1.0, 2.0), 2)
    paths = dump_operators(str(tmp_path / "ops"), space)
    # M, Dr, Ds, V, three lifts, P, R and three Pf / Rf pairs
    assert len(paths) == 15
    M = np.loadtxt(str(tmp_path / "ops" / "N2_M.txt"))
    np.testing.assert_allclose(M, space.re.M, rtol=1e-15)


def test_meshio_formats(unit_square, tmp_path):
    path = str(tmp_path / "square.vtu")
    meshio.write_points_cells(path, np.column_stack([unit_square.vertices, np.zeros(unit_square.NV)]),
                              [("triangle", unit_square.elements)])
    vertices, elements = read_triangles(path)
    np.testing.assert_allclose(vertices, unit_square.vertices)
    np.testing.assert_array_equal(elements, unit_square.elements)
    assert load_mesh(path).K == 2

    garbage = tmp_path / "garbage.msh"
    garbage.write_text("$MeshFormat\nnot a mesh\n")
    with pytest.raises(ValueError):
        read_triangles(str(garbage))
