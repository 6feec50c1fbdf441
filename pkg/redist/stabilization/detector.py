import logging
import numpy as np

from ..discretization.refelem import nodal_to_modal, modal_to_nodal


MODES = ('auto', 'always_on', 'off')
BASELINE = 1e-14
MIN_AUTO_ORDER = 3


class RegularityReport(object):
    """
    Per-element outcome of the modal regularity detector.

    Parameters
    ----------
    decay_exponent: ndarray (K,)
        Fitted modal decay rate s (inf for fields without resolved fluctuation,
        nan where the field is not finite or the fit was skipped)
    troubled: ndarray (K,) of bool
    threshold: float
    mode: str
    """
    def __init__(self, decay_exponent, troubled, threshold, mode):
        self.decay_exponent = decay_exponent
        self.troubled = troubled
        self.threshold = threshold
        self.mode = mode

    @property
    def count(self):
        return int(self.troubled.sum())

    @property
    def fraction(self):
        return self.count / max(self.troubled.size, 1)


def degree_norms(field, re):
    """L2 norm of the modal coefficients of each total degree k = 0..N, shape (K, N+1)."""
    modal = nodal_to_modal(re, field)
    return np.stack([np.linalg.norm(modal[:, re.degree == k], axis=1) for k in range(re.N + 1)],
                    axis=1)


def decay_exponents(field, re):
    """
    Modal decay rate s of every element.

    Per-degree modal norms q_k are skyline-pegged, q_k <- max_{i >= min(k, N-1)} q_i,
    so the two highest degrees share one value and odd/even cancellations do
    not fake a fast decay. The result is floored at BASELINE * ||modes|| and
    fitted as log q_k = log C - s log k over k = 1..N.
    """
    if re.N < 2:
        raise ValueError("A decay fit needs N >= 2, got N={0:d}".format(re.N))
    norms = degree_norms(field, re)
    skyline = np.maximum.accumulate(norms[:, ::-1], axis=1)[:, ::-1]
    skyline[:, re.N] = skyline[:, re.N - 1]
    floor = BASELINE * np.linalg.norm(norms, axis=1)
    pegged = np.maximum(skyline[:, 1:], floor[:, None])

    logk = np.log(np.arange(1, re.N + 1))
    centred = logk - logk.mean()
    logc = np.log(np.maximum(pegged, np.finfo(float).tiny))
    slope = (logc - logc.mean(axis=1, keepdims=True)) @ centred / (centred @ centred)
    s = -slope
    return np.where(skyline[:, 1] <= floor, np.inf, s)


def truncate_top_degree(field, re):
    """Nodal field with its degree-N modal content removed."""
    modal = nodal_to_modal(re, field)
    modal[..., re.degree == re.N] = 0.0
    return modal_to_nodal(re, modal)


def detect(field, re, mode='auto', threshold=1.0, active=None, logger=None):
    """
    Flag troubled elements of a nodal field (K, Np).

    Parameters
    ----------
    mode: str
        'auto' thresholds the decay rate, 'always_on' flags every active
        element, 'off' flags none
    threshold: float
        s*, elements with s < s* are troubled
    active: ndarray (K,) of bool, optional
        Elements eligible for flagging (frozen band elements are excluded)
    """
    logger = logger or logging.getLogger(__name__)
    if mode not in MODES:
        raise ValueError("Unknown limiter mode '{0}', expected one of {1}".format(mode, MODES))
    field = np.asarray(field, dtype=float)
    K = field.shape[0]
    active = np.ones(K, dtype=bool) if active is None else np.asarray(active, dtype=bool)

    if mode == 'auto' and re.N < MIN_AUTO_ORDER:
        logger.warning("Modal detector needs N >= {0:d} (N={1:d}); limiting every element".format(
            MIN_AUTO_ORDER, re.N))
        mode = 'always_on'

    s = np.full(K, np.nan)
    if mode == 'off':
        troubled = np.zeros(K, dtype=bool)
    elif mode == 'always_on':
        troubled = active.copy()
    else:
        finite = np.isfinite(field).all(axis=1)
        s[finite] = decay_exponents(field[finite], re)
        troubled = ~finite | (s < threshold)
        troubled &= active
    return RegularityReport(s, troubled, threshold, mode)
