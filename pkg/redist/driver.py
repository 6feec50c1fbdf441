import argparse
import logging
import os
import os.path as osp
import sys
import time
from datetime import datetime
import numpy as np
import pandas as pd

from .cases import gen_case
from .discretization import DGSpace, generate_square_mesh, refine_uniform
from .solver import (EikonalOperator, FlowState, SolverError, advance, frozen_elements,
                     reconstruct_distance, configure_threads)
from .utils.config_utils import (load_config_data, update_config, validate_config, merge_config,
                                 DEFAULT_CONFIG, LIMITER_CHOICES)
from .utils.metrics import compute_errors, observed_order, eikonal_residual, band_mask
from .utils.mesh_files import load_mesh, write_native
from .utils.output import write_vtk, write_nodal_csv, dump_operators
from .utils.plotting import plot_convergence, plot_contours


"""
############################## Global Arguments ##############################
"""
ORDER_COLUMNS = ('l2', 'linf', 'l1', 'l1_abs')
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2


class FieldSnapshot(object):
    """Nodal fields of one completed run."""
    def __init__(self, space, phi0, phi, exact, troubled, resolved):
        self.space = space
        self.phi0 = phi0
        self.phi = phi
        self.exact = exact
        self.troubled = troubled
        self.resolved = resolved

    @property
    def error(self):
        return self.phi - self.exact


def flatten_config(cfg):
    """section.key -> value for every scalar entry of a config."""
    flat = {}
    for section, values in cfg.toDict().items():
        if isinstance(values, dict):
            for key, value in values.items():
                flat['{0}.{1}'.format(section, key)] = value if np.isscalar(value) or value is None \
                    else str(value)
        else:
            flat[section] = values
    return flat


class Reinitializer:
    def __init__(self, config_file_data):
        self.cfg = config_file_data
        results_dir = osp.abspath(osp.expanduser(self.cfg.output.results_dir))
        self.limiter = self.cfg.limiter.mode
        self.all_logs_dir = os.path.join(results_dir,
                                         self.cfg.case.name,
                                         'N' + str(self.cfg.discretization.order),
                                         self.limiter)
        os.makedirs(self.all_logs_dir, exist_ok=True)

        # setup logger
        plain_formatter = logging.Formatter("[%(asctime)s] %(name)s %(levelname)s: %(message)s",
                                            datefmt="%m/%d %H:%M:%S")
        now = datetime.now()
        current_time = now.strftime("%y/%m/%d %H:%M:%S.%f")
        self.logger = logging.getLogger(__name__ + "  " + current_time)
        self.logger.setLevel(logging.DEBUG)
        s_handler = logging.StreamHandler(stream=sys.stdout)
        s_handler.setFormatter(plain_formatter)
        s_handler.setLevel(getattr(logging, str(self.cfg.output.log_level or 'INFO').upper()))
        self.logger.addHandler(s_handler)
        f_handler = logging.FileHandler(os.path.join(self.all_logs_dir, self.cfg.case.name + "_N" +
                                                     str(self.cfg.discretization.order) + ".log"),
                                        mode='w')
        f_handler.setFormatter(plain_formatter)
        f_handler.setLevel(logging.DEBUG)
        self.logger.addHandler(f_handler)
        self.logger.propagate = False

        configure_threads(self.logger)
        case_args = {}
        if self.cfg.case.name == 'multi' and self.cfg.case.multi_circles:
            case_args['circles'] = self.cfg.case.multi_circles
        self.case = gen_case(self.cfg.case.name, **case_args)

    def close(self):
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

    """
    ############################## Mesh and Space ##############################
    """

    def build_mesh(self, level=0):
        disc = self.cfg.discretization
        if disc.mesh:
            mesh = load_mesh(disc.mesh, self.logger)
        else:
            mesh = generate_square_mesh(self.case.half_width if disc.half_width is None else disc.half_width,
                                        disc.h, self.logger)
        for _ in range(level):
            mesh = refine_uniform(mesh)
        return mesh

    def build_space(self, mesh):
        return DGSpace(mesh, self.cfg.discretization.order, logger=self.logger)

    def final_time(self, mesh, band_eps):
        """Explicit final_time, otherwise the time the front needs to sweep the band."""
        final_time = self.cfg.solver.final_time
        if final_time != 'auto':
            return float(final_time)
        h_max = float(mesh.face_lengths().max())
        if np.isfinite(band_eps):
            return 1.25 * band_eps + 2.0 * h_max
        if self.case.final_time is not None:
            return float(self.case.final_time)
        return 1.25 * self.case.half_diagonal + 2.0 * h_max

    """
    ############################## Runs ##############################
    """

    def run_single(self, level=0, band_eps=None, mesh=None):
        """
        One reinitialization: phi0 -> dual flows -> arrival times -> error norms.

        Returns
        ----------
        row: dict
            CSV row with the norms, diagnostics and the echoed config
        snapshot: FieldSnapshot
        """
        band_eps = float(self.cfg.solver.band) if band_eps is None else float(band_eps)
        start = time.time()
        mesh = self.build_mesh(level) if mesh is None else mesh
        space = self.build_space(mesh)
        h = mesh.characteristic_length()
        self.logger.info("{0} level {1:d}: K={2:d}, N={3:d}, h={4:.4f}, band={5}".format(
            self.case.name, level, mesh.K, space.N, h, band_eps))

        phi0 = self.case.phi0(space.x, space.y)
        exact = self.case.exact(space.x, space.y)
        frozen = frozen_elements(phi0, space, band_eps)
        if frozen.any():
            self.logger.info("Banded run: {0:d} of {1:d} elements frozen".format(int(frozen.sum()), mesh.K))
        operator = EikonalOperator(space, fv_order=self.cfg.limiter.fv_order, frozen=frozen,
                                   logger=self.logger)
        final_time = self.final_time(mesh, band_eps)
        state = FlowState.from_initial(phi0, space.sg)
        state, history = advance(state, operator, final_time, cfl=self.cfg.solver.cfl,
                                 limiter=self.limiter, threshold=self.cfg.limiter.threshold,
                                 progress=bool(self.cfg.solver.progress), logger=self.logger)
        arrival = reconstruct_distance(history, phi0, final_time, logger=self.logger)
        runtime = time.time() - start

        report = compute_errors(arrival.phi, exact, space, band_eps, self.case.interface_length,
                                h_char=h, logger=self.logger)
        median, worst = eikonal_residual(arrival.phi, space, band_mask(exact, band_eps))
        row = {'case': self.case.name, 'N': space.N, 'level': level, 'h': h, 'K': mesh.K,
               'band_eps': band_eps, 'final_time': final_time, 'dt': state.dt, 'steps': state.step,
               'troubled_fraction': float(state.troubled.mean()),
               'eikonal_median': median, 'eikonal_max': worst,
               'unresolved': arrival.unresolved_count, 'runtime_s': runtime}
        row.update(report.as_dict())
        row.update(flatten_config(self.cfg))
        self.logger.info("Run time {0:.2f} s, troubled fraction {1:.3f}, eikonal residual median {2:.3e}".format(
            runtime, row['troubled_fraction'], median))

        snapshot = FieldSnapshot(space, phi0, arrival.phi, exact, state.troubled.astype(float),
                                 arrival.resolved)
        if self.cfg.output.write_fields:
            self.write_fields(snapshot, level, band_eps)
        if self.cfg.output.dump_operators and level == 0:
            dump_operators(osp.join(self.all_logs_dir, 'operators'), space)
        return row, snapshot

    def run_convergence(self, levels=None):
        """run_single on successively refined meshes with observed orders appended."""
        levels = int(self.cfg.discretization.levels) if levels is None else int(levels)
        rows = []
        mesh = self.build_mesh(0)
        for level in range(levels):
            if level:
                mesh = refine_uniform(mesh)
            row, _ = self.run_single(level, mesh=mesh)
            rows.append(row)
        df = pd.DataFrame(rows)
        for column in ORDER_COLUMNS:
            orders = observed_order(df[column].values, df['h'].values) if levels > 1 else []
            df[column + '_order'] = np.concatenate([[np.nan], orders])
        for level in range(1, levels):
            self.logger.info("Level {0:d} orders: L2 {1:.2f}  Linf {2:.2f}  L1 {3:.2f}".format(
                level, df['l2_order'][level], df['linf_order'][level], df['l1_order'][level]))
        self.save_table(df, 'results_{0}_N{1:d}.csv'.format(self.case.name, self.cfg.discretization.order))
        if self.cfg.output.plot and levels > 1:
            plot_convergence(df, osp.join(self.all_logs_dir, 'convergence.png'),
                             order=self.cfg.discretization.order + 1, title=self.case.name)
        return df

    def run_band_study(self, bands=None, level=0):
        """Error norms and wall clock for several band thicknesses plus the global run."""
        bands = list(self.cfg.solver.bands or [0.1, 0.2, 0.3]) if bands is None else list(bands)
        mesh = self.build_mesh(level)
        rows = []
        for band_eps in bands + [np.inf]:
            row, _ = self.run_single(level, band_eps=band_eps, mesh=mesh)
            rows.append(row)
        df = pd.DataFrame(rows)
        self.save_table(df, 'results_bands_{0}_N{1:d}.csv'.format(self.case.name,
                                                                 self.cfg.discretization.order))
        return df

    """
    ############################## Output ##############################
    """

    def save_table(self, df, name):
        path = osp.join(self.all_logs_dir, name)
        df.to_csv(path, index=False)
        self.logger.info("Results written to {0}".format(path))
        return path

    def write_fields(self, snapshot, level=0, band_eps=np.inf):
        tag = '{0}_N{1:d}_L{2:d}'.format(self.case.name, snapshot.space.N, level)
        if np.isfinite(band_eps):
            tag += '_band{0:g}'.format(band_eps)
        fields = {'phi': snapshot.phi, 'phi0': snapshot.phi0, 'exact': snapshot.exact,
                  'error': snapshot.error, 'troubled': snapshot.troubled}
        paths = [write_vtk(osp.join(self.all_logs_dir, tag + '.vtk'), snapshot.space, fields),
                 write_nodal_csv(osp.join(self.all_logs_dir, tag + '_nodes.csv'), snapshot.space, fields),
                 write_native(osp.join(self.all_logs_dir, tag + '.mesh'), snapshot.space.mesh)]
        if self.cfg.output.plot:
            paths.append(plot_contours(snapshot.space, snapshot.phi0, snapshot.phi,
                                       osp.join(self.all_logs_dir, tag + '_contours.png'), title=tag))
        self.logger.debug("Field files: {0}".format(", ".join(paths)))
        return paths

    def run(self):
        if self.cfg.solver.bands:
            return self.run_band_study(level=int(self.cfg.discretization.levels) - 1)
        return self.run_convergence()


"""
############################## Command line ##############################
"""

def _band(text):
    return float('inf') if str(text).lower() in ('inf', 'infinity', 'none') else float(text)


def parse_args(argv=None):
    argparser = argparse.ArgumentParser(description="High-order level-set reinitialization on triangle meshes")
    argparser.add_argument("--config", "--config_file", dest="config", default=None,
                           help="python, yaml or flat key=value config file")
    argparser.add_argument("--case", default=None)
    argparser.add_argument("--order", type=int, default=None)
    argparser.add_argument("--levels", type=int, default=None)
    argparser.add_argument("--mesh-size", dest="h", type=float, default=None)
    argparser.add_argument("--cfl", type=float, default=None)
    argparser.add_argument("--band", type=_band, default=None)
    argparser.add_argument("--bands", type=float, nargs='+', default=None,
                           help="band thicknesses of a banded study")
    argparser.add_argument("--final-time", dest="final_time", default=None)
    argparser.add_argument("--limiter", choices=LIMITER_CHOICES, default=None)
    argparser.add_argument("--threshold", type=float, default=None)
    argparser.add_argument("--fv-order", dest="fv_order", type=int, choices=(1, 2), default=None)
    argparser.add_argument("--mesh", default=None)
    argparser.add_argument("--out", default=None)
    argparser.add_argument("--plot", action="store_true")
    argparser.add_argument("--progress", action="store_true")
    return argparser.parse_args(argv)


def build_config(args):
    cfg = load_config_data(args.config) if args.config else merge_config(DEFAULT_CONFIG, {})
    cfg = update_config(cfg, vars(args))
    if args.bands:
        cfg.solver.bands = list(args.bands)
    if args.plot:
        cfg.output.plot = True
    if args.progress:
        cfg.solver.progress = True
    return validate_config(cfg)


def main(argv=None):
    logging.basicConfig(format="[%(asctime)s] %(name)s %(levelname)s: %(message)s",
                        datefmt="%m/%d %H:%M:%S", level=logging.INFO)
    logger = logging.getLogger(__name__)
    try:
        cfg = build_config(parse_args(argv))
    except (ValueError, AssertionError, FileNotFoundError, IOError) as e:
        logger.error("Configuration error: {0}".format(e))
        return EXIT_CONFIG

    reinitializer = None
    try:
        reinitializer = Reinitializer(cfg)
        reinitializer.run()
    except SolverError as e:
        logger.error("Solver failure: {0}".format(e))
        return EXIT_SOLVER
    except (ValueError, AssertionError, FileNotFoundError, IOError) as e:
        logger.error("Configuration error: {0}".format(e))
        return EXIT_CONFIG
    finally:
        if reinitializer is not None:
            reinitializer.close()
    return EXIT_OK


def cli():
    sys.exit(main())
