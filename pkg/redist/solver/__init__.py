from .operator import EikonalOperator, frozen_elements
from .timeloop import FlowState, HistoryBuffer, SolverError, compute_dt, lserk4_step, advance
from .arrival import (NewtonPolynomial, ArrivalResult, eno_interpolant, find_root, reconstruct_distance,
                      configure_threads)
