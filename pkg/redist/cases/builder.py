"""
Benchmark interfaces: initial level-set functions and reference signed distances.
"""
import numpy as np
from scipy.spatial import cKDTree
from scipy.special import ellipe


"""
############################## Global Arguments ##############################
"""
DEFAULT_HALF_WIDTH = 2.0
ELLIPSE_SAMPLES = 100000

# 12 circles of radius 0.35 on a staggered 4 x 3 lattice
MULTI_RADIUS = 0.35
MULTI_COLUMNS = (-1.35, -0.45, 0.45, 1.35)
MULTI_ROWS = (-1.2, 0.0, 1.2)
MULTI_STAGGER = (-0.15, 0.15, -0.15)


class TestCase(object):
    """
    One reinitialization problem on [-L, L]^2.

    Parameters
    ----------
    name: str
    phi0: callable
        (x, y) -> initial level-set values
    exact: callable
        (x, y) -> signed distance to the zero level set of phi0
    interface_length: float
    half_width: float
    final_time: float, optional
        Run time used by the global (unbanded) reinitialization
    """
    __test__ = False

    def __init__(self, name, phi0, exact, interface_length, half_width=DEFAULT_HALF_WIDTH,
                 final_time=None):
        self.name = name
        self.phi0 = phi0
        self.exact = exact
        self.interface_length = interface_length
        self.half_width = half_width
        self.final_time = final_time

    @property
    def half_diagonal(self):
        return np.sqrt(2.0) * self.half_width


def perturbation(x, y, x0=1.0, y0=1.0):
    """Strictly positive factor (x - x0)^2 + (y - y0)^2 + 0.1."""
    return (x - x0) ** 2 + (y - y0) ** 2 + 0.1


def circle_distance(x, y, cx, cy, r):
    return np.hypot(x - cx, y - cy) - r


def case_circle():
    def exact(x, y):
        return circle_distance(x, y, 0.0, 0.0, 1.0)

    def phi0(x, y):
        return perturbation(x, y) * exact(x, y)

    return TestCase('circle', phi0, exact, 2.0 * np.pi)


def case_ellipse(samples=ELLIPSE_SAMPLES, A=1.0, B=0.5, x0=0.875, y0=0.5):
    """
    Ellipse x^2/A^2 + y^2/B^2 = 1. The reference distance is the distance to
    the nearest of `samples` interface points, signed by phi0.
    """
    theta = 2.0 * np.pi * np.arange(samples) / samples
    points = np.column_stack([A * np.cos(theta), B * np.sin(theta)])
    tree = cKDTree(points)
    major, minor = max(A, B), min(A, B)
    perimeter = 4.0 * major * ellipe(1.0 - (minor / major) ** 2)

    def phi0(x, y):
        return perturbation(x, y, x0, y0) * (np.sqrt(x ** 2 / A ** 2 + y ** 2 / B ** 2) - 1.0)

    def exact(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        dist, _ = tree.query(np.column_stack([x.ravel(), y.ravel()]))
        return dist.reshape(x.shape) * np.sign(phi0(x, y))

    return TestCase('ellipse', phi0, exact, perimeter)


def case_intersecting_circles(r=1.0, a=0.7):
    """Union of the discs of radius r centred at (-a, 0) and (a, 0)."""
    if not 0 < a < r:
        raise ValueError("Circles intersect only for 0 < a < r (a={0}, r={1})".format(a, r))
    h = np.sqrt(r ** 2 - a ** 2)
    centres = ((-a, 0.0), (a, 0.0))
    interface_length = 2.0 * 2.0 * r * (np.pi - np.arccos(a / r))

    def exact(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        d = [circle_distance(x, y, cx, cy, r) for cx, cy in centres]
        outside = np.minimum(d[0], d[1])

        corner = np.minimum(np.hypot(x, y - h), np.hypot(x, y + h))
        inner = corner
        for k, (cx, cy) in enumerate(centres):
            ox, oy = centres[1 - k]
            rho = np.hypot(x - cx, y - cy)
            safe = np.where(rho > 0, rho, 1.0)
            ux = np.where(rho > 0, (x - cx) / safe, 1.0 if cx < 0 else -1.0)
            uy = np.where(rho > 0, (y - cy) / safe, 0.0)
            qx, qy = cx + r * ux, cy + r * uy
            on_arc = np.hypot(qx - ox, qy - oy) >= r
            inner = np.where(on_arc, np.minimum(inner, r - rho), inner)
        return np.where(outside >= 0, outside, -inner)

    def phi0(x, y):
        return perturbation(x, y) * exact(x, y)

    return TestCase('xcircles', phi0, exact, interface_length, final_time=1.0)


def case_square(w=2.0, xc=0.0, yc=0.0):
    def phi0(x, y):
        return 0.8 * np.maximum(np.abs(x - xc) - 0.5 * w, np.abs(y - yc) - 0.5 * w)

    def exact(x, y):
        qx = np.abs(x - xc) - 0.5 * w
        qy = np.abs(y - yc) - 0.5 * w
        outside = np.hypot(np.maximum(qx, 0.0), np.maximum(qy, 0.0))
        return outside + np.minimum(np.maximum(qx, qy), 0.0)

    return TestCase('square', phi0, exact, 4.0 * w, final_time=1.5)


def multi_circle_layout():
    """Centres and radii (cx, cy, r) of the default 12-circle layout."""
    return [(cx + MULTI_STAGGER[j], cy, MULTI_RADIUS)
            for j, cy in enumerate(MULTI_ROWS) for cx in MULTI_COLUMNS]


def case_multi_circle(circles=None):
    """
    Minimum of the distances to several circles.

    Parameters
    ----------
    circles: list of (cx, cy, r), optional
        Defaults to multi_circle_layout()
    """
    circles = multi_circle_layout() if circles is None else [tuple(map(float, c)) for c in circles]
    if not circles:
        raise ValueError("At least one circle is required")

    def exact(x, y):
        return np.min([circle_distance(x, y, cx, cy, r) for cx, cy, r in circles], axis=0)

    def phi0(x, y):
        return perturbation(x, y) * exact(x, y)

    length = float(sum(2.0 * np.pi * r for _, _, r in circles))
    return TestCase('multi', phi0, exact, length, final_time=1.1)


CASES = {
    'circle': case_circle,
    'ellipse': case_ellipse,
    'xcircles': case_intersecting_circles,
    'square': case_square,
    'multi': case_multi_circle,
}


def gen_case(name, **kwargs):
    """Build a registered case by name."""
    if name not in CASES:
        raise ValueError("Unknown case '{0}', expected one of {1}".format(name, sorted(CASES)))
    return CASES[name](**kwargs)
