from .detector import RegularityReport, detect, decay_exponents, degree_norms, truncate_top_degree
from .fvsubcell import (SubcellState, SubcellScheme, WenoGradient, CoupledFlux, demote_element,
                        promote_element, couple_faces, weno_gradient, fv_rhs)
