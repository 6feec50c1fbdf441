"""
Time integration of the dual flows u (from phi0) and v (from -phi0).

Five-stage low-storage fourth-order Runge-Kutta, detection and representation
switching at step boundaries, and the per-node history used to locate first
arrival times.
"""
import logging
import math
import numpy as np
from tqdm import trange

from ..stabilization.detector import detect, truncate_top_degree, MIN_AUTO_ORDER


"""
############################## Global Arguments ##############################
"""
# Carpenter & Kennedy 5-stage, 4th-order low-storage coefficients
_RK4A = [0.0,
         -567301805773.0 / 1357537059087.0,
         -2404267990393.0 / 2016746695238.0,
         -3550918686646.0 / 2091501179385.0,
         -1275806237668.0 / 842570457699.0]

_RK4B = [1432997174477.0 / 9575080441755.0,
         5161836677717.0 / 13612068292357.0,
         1720146321549.0 / 2090206949498.0,
         3134564353537.0 / 4481467310338.0,
         2277821191437.0 / 14882151754819.0]

_RK4C = [0.0,
         1432997174477.0 / 9575080441755.0,
         2526269341429.0 / 6820363962896.0,
         2006345519317.0 / 3224310063776.0,
         2802321613138.0 / 2924317926251.0]

HISTORY_DEPTH = 6
LIMITER_MODES = {'auto': 'auto', 'on': 'always_on', 'always_on': 'always_on', 'off': 'off'}


class SolverError(RuntimeError):
    """Non-finite state produced during time stepping."""
    def __init__(self, message, element=None, stage=None):
        super().__init__(message)
        self.element = element
        self.stage = stage


class FlowState(object):
    """
    Dual flow fields.

    Parameters
    ----------
    u, v: ndarray (K, Np)
        Nodal values; on troubled elements they hold R applied to the subcell means
    u_means, v_means: ndarray (K, Ns)
        Subcell means, meaningful on troubled elements only
    troubled: ndarray (K,) of bool
    """
    def __init__(self, u, v, u_means, v_means, troubled, t=0.0, step=0):
        self.u = u
        self.v = v
        self.u_means = u_means
        self.v_means = v_means
        self.troubled = troubled
        self.t = t
        self.step = step
        self.dt = None

    @classmethod
    def from_initial(cls, phi0, sg):
        phi0 = np.asarray(phi0, dtype=float)
        K = phi0.shape[0]
        return cls(phi0.copy(), -phi0, np.zeros((K, sg.Ns)), np.zeros((K, sg.Ns)),
                   np.zeros(K, dtype=bool))

    def arrays(self):
        return [self.u, self.v, self.u_means, self.v_means]


class HistoryBuffer(object):
    """
    Six-deep per-node time history of u and v with first-crossing bookkeeping.

    A crossing of field f at node i is the first step pair (n, n+1) with
    f_n > 0 >= f_{n+1}. Once sample n+3 arrives (or the run ends) the samples
    n-2 .. n+3 are frozen into a per-node stencil. Indices -1, -2 are filled
    from the other field mirrored in time: u^{-k} = -v^{k} at t = -t_k.

    Parameters
    ----------
    n_nodes: int
    """
    def __init__(self, n_nodes):
        self.n_nodes = n_nodes
        self.count = 0
        self.times = np.zeros(HISTORY_DEPTH)
        self.values = np.zeros((2, HISTORY_DEPTH, n_nodes))
        self.early_times = np.zeros(2)
        self.early_values = np.zeros((2, 2, n_nodes))
        self.crossed = np.zeros((2, n_nodes), dtype=bool)
        self.pending = np.zeros((2, n_nodes), dtype=bool)
        self.bracket = np.full((2, n_nodes), -1, dtype=np.int64)
        self.stencil_times = np.zeros((2, n_nodes, HISTORY_DEPTH))
        self.stencil_values = np.zeros((2, n_nodes, HISTORY_DEPTH))
        self.stencil_size = np.zeros((2, n_nodes), dtype=np.int64)
        self.stencil_bracket = np.zeros((2, n_nodes), dtype=np.int64)

    @property
    def last_time(self):
        return self.times[(self.count - 1) % HISTORY_DEPTH] if self.count else None

    def record(self, t, u, v):
        m = self.count
        if m and t <= self.last_time:
            raise ValueError("History times must increase ({0} after {1})".format(t, self.last_time))
        slot = m % HISTORY_DEPTH
        self.times[slot] = t
        self.values[0, slot] = np.ravel(u)
        self.values[1, slot] = np.ravel(v)
        if m in (1, 2):
            self.early_times[m - 1] = t
            self.early_values[:, m - 1] = self.values[:, slot]
        if m:
            prev = self.values[:, (m - 1) % HISTORY_DEPTH]
            new = ~self.crossed & (prev > 0) & (self.values[:, slot] <= 0)
            self.crossed |= new
            self.pending |= new
            self.bracket[new] = m - 1
        self.count += 1
        ready = self.pending & (self.bracket + 3 <= m)
        if ready.any():
            self._store(ready)

    def finalize(self):
        if self.pending.any():
            self._store(self.pending)

    def _store(self, mask):
        field, node = np.nonzero(mask)
        last = self.count - 1
        n_early = min(last, 2)
        idx = self.bracket[field, node][:, None] + np.arange(-2, 4)[None, :]
        valid = (idx <= last) & (idx >= -n_early) & ((idx < 0) | (idx >= last - HISTORY_DEPTH + 1))

        ring = np.clip(idx, 0, None) % HISTORY_DEPTH
        mirror = np.clip(-idx - 1, 0, 1)
        times = np.where(idx < 0, -self.early_times[mirror], self.times[ring])
        values = np.where(idx < 0,
                          -self.early_values[1 - field[:, None], mirror, node[:, None]],
                          self.values[field[:, None], ring, node[:, None]])

        first = np.argmax(valid, axis=1)
        size = valid.sum(axis=1)
        cols = np.minimum(np.arange(HISTORY_DEPTH)[None, :] + first[:, None], HISTORY_DEPTH - 1)
        keep = np.arange(HISTORY_DEPTH)[None, :] < size[:, None]
        self.stencil_times[field, node] = np.where(keep, np.take_along_axis(times, cols, axis=1), 0.0)
        self.stencil_values[field, node] = np.where(keep, np.take_along_axis(values, cols, axis=1), 0.0)
        self.stencil_size[field, node] = size
        self.stencil_bracket[field, node] = 2 - first
        self.pending[field, node] = False

    def stencil(self, field):
        """Stored stencils of field 0 (u) or 1 (v): times, values, size, bracket position."""
        return (self.stencil_times[field], self.stencil_values[field],
                self.stencil_size[field], self.stencil_bracket[field])


def compute_dt(mesh, order, cfl):
    """dt = cfl * min inradius / (N+1)^2 for unit characteristic speed."""
    if cfl <= 0:
        raise ValueError("cfl must be positive, got {0}".format(cfl))
    r_in = mesh.inradius()
    if (r_in <= 0).any():
        raise ValueError("Degenerate element(s) {0}".format(np.flatnonzero(r_in <= 0)[:10].tolist()))
    return cfl * float(r_in.min()) / (order + 1) ** 2


def _check_finite(arrays, stage):
    for arr in arrays:
        bad = ~np.isfinite(arr)
        if bad.any():
            element = int(np.argwhere(bad)[0][0])
            raise SolverError("Non-finite value in element {0:d} at RK stage {1:d}".format(
                element, stage), element=element, stage=stage)


def lserk4_step(y, t, dt, rhs):
    """
    One low-storage RK4 step of a list of arrays, updated in place.

    Parameters
    ----------
    y: list of ndarray
    rhs: callable
        rhs(t, y) -> list of derivatives matching y
    """
    residual = [np.zeros_like(arr) for arr in y]
    for stage, (a, b, c) in enumerate(zip(_RK4A, _RK4B, _RK4C)):
        rates = rhs(t + c * dt, y)
        for arr, res, rate in zip(y, residual, rates):
            res *= a
            res += dt * rate
            arr += b * res
        _check_finite(y, stage)
    return y


def _mixed_rhs(operator, troubled):
    def rhs(t, y):
        u, v, u_means, v_means = y
        du, du_means = operator.rhs(u, u_means, troubled)
        dv, dv_means = operator.rhs(v, v_means, troubled)
        return [du, dv, du_means, dv_means]
    return rhs


def screen_troubled(state, re, mode, threshold, active, logger=None):
    """
    Troubled set for the coming step.

    Elements already troubled carry R applied to their subcell means, whose
    top-degree modes mostly reflect the subcell discretization. They are judged
    on that data with the degree-N modes removed, and the ones passing are
    released carrying the truncated data.

    Returns
    ----------
    troubled, released: ndarray (K,) of bool
    """
    fields = [state.u, state.v] if mode == 'auto' else [state.u]
    screen = mode == 'auto' and state.troubled.any()
    troubled = np.zeros(state.troubled.shape, dtype=bool)
    candidates = []
    for field in fields:
        candidate = field.copy()
        if screen:
            candidate[state.troubled] = truncate_top_degree(field[state.troubled], re)
        candidates.append(candidate)
        troubled |= detect(candidate, re, mode, threshold, active, logger).troubled
    released = state.troubled & ~troubled
    if screen and released.any():
        for field, candidate in zip(fields, candidates):
            field[released] = candidate[released]
    return troubled, released


def switch_representations(state, troubled, sg):
    """
    Demote newly troubled elements (means = P nodal). Elements leaving the
    troubled set keep the nodal values screen_troubled left them.
    """
    newly = troubled & ~state.troubled
    if newly.any():
        state.u_means[newly] = state.u[newly] @ sg.P.T
        state.v_means[newly] = state.v[newly] @ sg.P.T
    state.troubled = troubled.copy()
    return newly


def advance(state, operator, final_time, cfl=1.0, limiter='auto', threshold=1.0,
            progress=False, logger=None):
    """
    March the dual flows to final_time with a constant dt <= the CFL bound.

    Parameters
    ----------
    state: FlowState
    operator: EikonalOperator
    limiter: str
        'auto', 'on' / 'always_on' or 'off'

    Returns
    ----------
    state: FlowState
    history: HistoryBuffer
    """
    logger = logger or logging.getLogger(__name__)
    space = operator.space
    sg, N = space.sg, space.N
    if final_time < 0:
        raise ValueError("final_time must be non-negative, got {0}".format(final_time))
    if limiter not in LIMITER_MODES:
        raise ValueError("Unknown limiter mode '{0}'".format(limiter))
    mode = LIMITER_MODES[limiter]
    if mode == 'auto' and N < MIN_AUTO_ORDER:
        logger.warning("Modal detector needs N >= {0:d} (N={1:d}); limiting every element".format(
            MIN_AUTO_ORDER, N))
        mode = 'always_on'

    history = HistoryBuffer(space.n_nodes)
    history.record(state.t, state.u, state.v)
    if final_time == 0:
        history.finalize()
        return state, history

    dt_max = compute_dt(space.mesh, N, cfl)
    nsteps = int(math.ceil(final_time / dt_max - 1e-10))
    dt = final_time / nsteps
    state.dt = dt
    active = operator.active
    logger.info("Time stepping to T={0:.4f}: {1:d} steps, dt={2:.4e}, limiter={3}".format(
        final_time, nsteps, dt, mode))

    for n in trange(nsteps, disable=not progress):
        troubled, released = screen_troubled(state, space.re, mode, threshold, active, logger)
        switch_representations(state, troubled, sg)

        lserk4_step(state.arrays(), state.t, dt, _mixed_rhs(operator, troubled))
        if troubled.any():
            state.u[troubled] = state.u_means[troubled] @ sg.R.T
            state.v[troubled] = state.v_means[troubled] @ sg.R.T
        state.step = n + 1
        state.t = (n + 1) * dt
        history.record(state.t, state.u, state.v)
        logger.debug("step {0:d} t {1:.6f} dt {2:.4e} troubled {3:d} released {4:d}".format(
            state.step, state.t, dt, int(troubled.sum()), int(released.sum())))

    history.finalize()
    return state, history
