"""
Signed distance from first arrival times.

For every node the crossing of u (phi0 > 0) or v (phi0 < 0) through zero is
located by a third-order ENO interpolant of the stored time stencil followed by
a safeguarded Newton iteration started at the bracket midpoint.
"""
import logging
import os
import numpy as np
import numba
from numba import jit, prange


"""
############################## Global Arguments ##############################
"""
ENO_ORDER = 3
NEWTON_MAX_ITER = 25
BISECTION_MAX_ITER = 200
RESIDUAL_TOL = 1e-13
STEP_TOL = 1e-14


"""
############################## numba kernels ##############################
"""
@jit(nopython=True, cache=True)
def _eno_newton(t, y, m, b, order):
    """
    Adaptive ENO stencil over samples t[:m], y[:m] starting at {t[b], t[b+1]}.
    Returns Newton nodes, coefficients, achieved degree and leftmost stencil index.
    """
    dd = np.zeros((m, m))
    for i in range(m):
        dd[0, i] = y[i]
    for k in range(1, m):
        for i in range(m - k):
            dd[k, i] = (dd[k - 1, i + 1] - dd[k - 1, i]) / (t[i + k] - t[i])

    nodes = np.zeros(order + 1)
    coef = np.zeros(order + 1)
    nodes[0] = t[b]
    nodes[1] = t[b + 1]
    coef[0] = dd[0, b]
    coef[1] = dd[1, b]
    left = b
    deg = 1
    for k in range(2, order + 1):
        can_left = left - 1 >= 0
        can_right = left + k < m
        if not can_left and not can_right:
            break
        if can_left and can_right:
            go_left = abs(dd[k, left - 1]) <= abs(dd[k, left])
        else:
            go_left = can_left
        if go_left:
            left -= 1
            nodes[k] = t[left]
        else:
            nodes[k] = t[left + k]
        coef[k] = dd[k, left]
        deg = k
    return nodes, coef, deg, left


@jit(nopython=True, cache=True)
def _newton_eval(nodes, coef, deg, x):
    p = coef[deg]
    dp = 0.0
    for k in range(deg - 1, -1, -1):
        dp = dp * (x - nodes[k]) + p
        p = p * (x - nodes[k]) + coef[k]
    return p, dp


@jit(nopython=True, cache=True)
def _newton_root(nodes, coef, deg, a, b, scale, dt):
    """Safeguarded Newton on [a, b]; nan when p does not change sign."""
    fa = _newton_eval(nodes, coef, deg, a)[0]
    fb = _newton_eval(nodes, coef, deg, b)[0]
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        return np.nan
    lo, hi, flo = a, b, fa
    x = 0.5 * (a + b)
    for it in range(NEWTON_MAX_ITER + BISECTION_MAX_ITER):
        fx, dfx = _newton_eval(nodes, coef, deg, x)
        if abs(fx) < RESIDUAL_TOL * scale:
            return x
        if fx * flo > 0.0:
            lo, flo = x, fx
        else:
            hi = x
        if hi - lo < STEP_TOL * dt:
            return 0.5 * (lo + hi)
        x_new = 0.5 * (lo + hi)
        if it < NEWTON_MAX_ITER and dfx != 0.0:
            trial = x - fx / dfx
            if lo < trial < hi:
                x_new = trial
        if abs(x_new - x) < STEP_TOL * dt:
            return x_new
        x = x_new
    return x


@jit(nopython=True, parallel=True, cache=True)
def _arrival_kernel(times, values, size, bracket, order):
    n = times.shape[0]
    roots = np.full(n, np.nan)
    for i in prange(n):
        m = size[i]
        b = bracket[i]
        if m < 2:
            continue
        nodes, coef, deg, left = _eno_newton(times[i], values[i], m, b, order)
        scale = max(np.max(np.abs(values[i, :m])), 1.0)
        dt = times[i, b + 1] - times[i, b]
        roots[i] = _newton_root(nodes, coef, deg, times[i, b], times[i, b + 1], scale, dt)
    return roots


"""
############################## Python API ##############################
"""
class NewtonPolynomial(object):
    """
    Polynomial in Newton divided-difference form
    p(t) = c0 + c1 (t - x0) + c2 (t - x0)(t - x1) + ...

    Parameters
    ----------
    nodes: array-like
        Newton nodes x0, x1, ... in the order they joined the stencil
    coefficients: array-like
    degree: int, optional
    start: int, optional
        Index of the leftmost sample of the ENO stencil
    """
    def __init__(self, nodes, coefficients, degree=None, start=None):
        coefficients = np.asarray(coefficients, dtype=float)
        self.degree = len(coefficients) - 1 if degree is None else int(degree)
        self.coefficients = np.zeros(self.degree + 1)
        self.coefficients[:self.degree + 1] = coefficients[:self.degree + 1]
        self.nodes = np.zeros(self.degree + 1)
        nodes = np.asarray(nodes, dtype=float)[:self.degree]
        self.nodes[:len(nodes)] = nodes
        self.start = start

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        p = np.full_like(t, self.coefficients[self.degree])
        for k in range(self.degree - 1, -1, -1):
            p = p * (t - self.nodes[k]) + self.coefficients[k]
        return p

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        p = np.full_like(t, self.coefficients[self.degree])
        dp = np.zeros_like(t)
        for k in range(self.degree - 1, -1, -1):
            dp = dp * (t - self.nodes[k]) + p
            p = p * (t - self.nodes[k]) + self.coefficients[k]
        return dp

    def stencil(self, times):
        """Sample times used by the ENO stencil."""
        return np.asarray(times)[self.start:self.start + self.degree + 1]


class ArrivalResult(object):
    """
    Parameters
    ----------
    phi: ndarray
        Reconstructed signed distance, same shape as phi0
    resolved: ndarray of bool
        False where no crossing was found and phi is clamped to +-final_time
    """
    def __init__(self, phi, resolved):
        self.phi = phi
        self.resolved = resolved

    @property
    def unresolved_count(self):
        return int((~self.resolved).sum())


def eno_interpolant(times, values, bracket_index, order=ENO_ORDER):
    """
    Third-order ENO interpolant around the bracket [times[b], times[b+1]].
    With fewer samples on one side the order drops to what the data allows.
    """
    times = np.ascontiguousarray(times, dtype=float)
    values = np.ascontiguousarray(values, dtype=float)
    m = len(times)
    if len(values) != m:
        raise ValueError("times and values differ in length ({0} vs {1})".format(m, len(values)))
    if not 0 <= bracket_index < m - 1:
        raise ValueError("Bracket index {0} outside a {1}-sample stencil".format(bracket_index, m))
    if (np.diff(times) <= 0).any():
        raise ValueError("Sample times must be strictly increasing")
    nodes, coef, deg, left = _eno_newton(times, values, m, int(bracket_index), int(order))
    return NewtonPolynomial(nodes, coef, deg, left)


def find_root(poly, a, b, scale=1.0, dt=None):
    """
    Root of a Newton-form polynomial inside [a, b]: Newton from the midpoint,
    bisection whenever an iterate leaves the bracket or after the Newton budget.
    """
    dt = (b - a) if dt is None else dt
    root = _newton_root(np.ascontiguousarray(poly.nodes), np.ascontiguousarray(poly.coefficients),
                        poly.degree,
                        float(a), float(b), float(scale), float(dt))
    if np.isnan(root):
        raise ValueError("Polynomial does not change sign on [{0}, {1}]".format(a, b))
    return root


def configure_threads(logger=None):
    """Cap the numba worker count with REDIST_THREADS when set."""
    logger = logger or logging.getLogger(__name__)
    value = os.environ.get('REDIST_THREADS')
    if not value:
        return numba.get_num_threads()
    threads = max(1, min(int(value), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(threads)
    logger.info("Using {0:d} worker threads".format(threads))
    return threads


def reconstruct_distance(history, phi0, final_time, logger=None):
    """
    phi = t_root where u crosses zero (phi0 > 0), -t_root where v does (phi0 < 0)
    and 0 on the interface. Nodes without a crossing are clamped to
    sign(phi0) * final_time.

    Parameters
    ----------
    history: HistoryBuffer
    phi0: ndarray
    final_time: float

    Returns
    ----------
    ArrivalResult
    """
    logger = logger or logging.getLogger(__name__)
    shape = np.shape(phi0)
    phi0 = np.ravel(phi0)
    if phi0.size != history.n_nodes:
        raise ValueError("phi0 has {0} nodes, history holds {1}".format(phi0.size, history.n_nodes))
    history.finalize()
    sign = np.sign(phi0)
    field = np.where(phi0 > 0, 0, 1)
    node = np.arange(phi0.size)

    times = history.stencil_times[field, node]
    values = history.stencil_values[field, node]
    size = np.where(history.crossed[field, node] & (sign != 0), history.stencil_size[field, node], 0)
    bracket = history.stencil_bracket[field, node]
    roots = _arrival_kernel(np.ascontiguousarray(times), np.ascontiguousarray(values),
                            size.astype(np.int64), bracket.astype(np.int64), ENO_ORDER)

    resolved = np.isfinite(roots)
    if resolved.any():
        b = bracket[resolved]
        rows = np.flatnonzero(resolved)
        lo = times[rows, b]
        hi = times[rows, b + 1]
        assert ((roots[resolved] >= lo) & (roots[resolved] <= hi)).all(), \
            "Arrival time outside its bracketing step interval"

    phi = np.where(resolved, sign * np.where(resolved, roots, 0.0), sign * final_time)
    on_interface = sign == 0
    phi[on_interface] = 0.0
    resolved |= on_interface
    n_missing = int((~resolved).sum())
    if n_missing:
        logger.warning("{0:d} node(s) without a crossing before t={1:.4f}; clamped".format(
            n_missing, final_time))
    return ArrivalResult(phi.reshape(shape), resolved.reshape(shape))
