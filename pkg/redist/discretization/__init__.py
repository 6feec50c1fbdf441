from .refelem import ReferenceElement, build_reference_element, nodal_to_modal, modal_to_nodal, warp_blend_nodes
from .mesh import (Mesh, GeometricFactors, generate_square_mesh, refine_uniform, build_connectivity,
                   orient_elements, compute_geometry, map_to_physical)
from .subgrid import SubcellGrid, build_subcell_grid, structured_simplex_pattern
from .space import DGSpace
from .ldg import GradientPair, FluxOverride, ldg_gradients, llf_hamiltonian, dg_rhs
