"""Brute-force references for the analytic computations.

The area oracles never touch the crossing finder or the adaptive
quadrature: areas come from hit-or-miss sampling, from Sutherland-Hodgman
clipping of polygons, or from a fixed uniform polar sum, so agreement with
the analytic paths is evidence rather than tautology.  The finite-difference
oracle differences the analytic area on purpose: it checks the derivative
formulas, which use only crossing positions and angles.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ._workers import parallel_map

CHUNK = 1 << 18
ELLIPSE_GON = 4096
POLAR_SAMPLES = 1 << 14


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    sigma: float
    method: str
    info: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {"value": self.value, "sigma": self.sigma, "method": self.method}
        out.update({k: v for k, v in self.info.items() if not isinstance(v, np.ndarray)})
        return out


# ------------------------------------------------------------------ Monte Carlo

def mc_area(predicate, bbox, samples=1_000_000, seed=0):
    """Hit-or-miss area of ``{x in bbox : predicate(x)}``.

    ``bbox`` is ``((xmin, xmax), (ymin, ymax))`` and ``predicate`` maps an
    ``(N, 2)`` array to booleans.  Draws come from a Philox generator keyed
    by ``seed`` and are consumed in fixed-size chunks, so the estimate is
    reproducible.
    """
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples")
    (x0, x1), (y0, y1) = bbox
    box = (x1 - x0) * (y1 - y0)
    rng = np.random.Generator(np.random.Philox(seed))
    hits, left = 0, samples
    while left:
        m = min(CHUNK, left)
        u = rng.random((m, 2))
        pts = np.column_stack([x0 + (x1 - x0) * u[:, 0], y0 + (y1 - y0) * u[:, 1]])
        hits += int(np.count_nonzero(predicate(pts)))
        left -= m
    p = hits / samples
    return OracleEstimate(box * p, box * np.sqrt(p * (1 - p) / samples), "mc",
                          {"seed": seed, "samples": samples})


def body_predicate(body):
    """Membership test ``|x|^2 <= G(arg x)`` for a body."""
    def inside(pts):
        return np.einsum("ij,ij->i", pts, pts) <= body.radial(np.arctan2(pts[:, 1], pts[:, 0]))
    return inside


def ellipse_predicate(ellipse):
    Q = ellipse.form

    def inside(pts):
        return np.einsum("ij,jk,ik->i", pts, Q, pts) <= 1.0
    return inside


def mc_intersection(body, ellipse, samples=1_000_000, seed=0):
    """Monte Carlo ``area(K n E)`` over the ellipse's bounding box."""
    inside_k, inside_e = body_predicate(body), ellipse_predicate(ellipse)
    w = np.sqrt(np.diag(np.linalg.inv(ellipse.form)))
    bbox = ((-w[0], w[0]), (-w[1], w[1]))
    return mc_area(lambda p: inside_k(p) & inside_e(p), bbox, samples, seed)


# ------------------------------------------------------------------- clipping

def polygon_area(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _ccw(P):
    P = np.asarray(P, dtype=float)
    return P if polygon_area(P) >= 0 else P[::-1]


def _clip_edge(P, a, b):
    """Keep the part of polygon ``P`` left of the directed line ``a -> b``."""
    if len(P) == 0:
        return P
    e = b - a
    side = e[0] * (P[:, 1] - a[1]) - e[1] * (P[:, 0] - a[0])
    inside = side >= 0
    if inside.all():
        return P
    prev = np.roll(P, 1, axis=0)
    sprev = np.roll(side, 1)
    iprev = np.roll(inside, 1)
    cross = inside != iprev
    denom = np.where(cross, sprev - side, 1.0)
    w = np.where(cross, sprev / denom, 0.0)
    hit = prev + w[:, None] * (P - prev)
    out = np.stack([hit, P], axis=1)
    keep = np.column_stack([cross, inside])
    return out[keep]


def clip_polygons(subject, clip):
    """Sutherland-Hodgman clip of ``subject`` by the convex polygon ``clip``."""
    P = _ccw(subject)
    C = _ccw(clip)
    for a, b in zip(C, np.roll(C, -1, axis=0)):
        P = _clip_edge(P, a, b)
        if len(P) == 0:
            break
    return P


def clip_area(polygon_a, polygon_b):
    """Exact (to rounding) area of the intersection of two convex polygons.

    The polygon with fewer vertices serves as the clip window.
    """
    A, B = np.asarray(polygon_a, dtype=float), np.asarray(polygon_b, dtype=float)
    subject, clip = (A, B) if len(A) >= len(B) else (B, A)
    P = clip_polygons(subject, clip)
    return OracleEstimate(abs(polygon_area(P)) if len(P) >= 3 else 0.0, 0.0, "clip")


def ellipse_polygon(ellipse, n=ELLIPSE_GON):
    """Inscribed ``n``-gon of an ellipse."""
    return ellipse.boundary(n)


def body_polygon(body, n=ELLIPSE_GON):
    if body.kind == "polygon":
        return np.asarray(body.vertices, dtype=float)
    return body.boundary_points(n)


def clip_intersection(body, ellipse, n=ELLIPSE_GON):
    """Clipping estimate of ``area(K n E)`` with smooth curves as ``n``-gons."""
    return clip_area(body_polygon(body, n), ellipse_polygon(ellipse, n))


# ------------------------------------------------------------ finite differences

def fd_derivative(body, order=1, h=1e-4, area=None, extrapolate=False):
    """Central difference of ``t -> area(K n E_t)`` at ``t = 0``.

    With ``extrapolate`` the steps ``h`` and ``h/2`` are combined by one
    Richardson step, cancelling the ``h^2`` truncation term; this matters
    when a crossing angle is small and the higher derivatives are large.
    """
    from .conic import standard_ellipse
    from .intersect import intersection_area

    if h <= 0:
        raise ValueError("h must be positive")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    f = area if area is not None else (lambda t: intersection_area(body, standard_ellipse(t)))
    f0 = f(0.0) if order == 2 else 0.0

    def central(step):
        if order == 1:
            return (f(step) - f(-step)) / (2 * step)
        return (f(step) - 2 * f0 + f(-step)) / step ** 2

    value = central(h)
    if extrapolate:
        value = (4 * central(h / 2) - value) / 3
    return OracleEstimate(float(value), 0.0, "fd",
                          {"order": order, "h": h, "extrapolate": extrapolate})


def crossing_step(alpha_min, base=1e-3, floor=1e-4):
    """FD step shrunk for shallow crossings.

    A crossing at angle ``alpha`` moves at speed about ``1 / tan(alpha)``
    along the circle, so the difference quotient only enters its asymptotic
    regime for ``h`` well below ``tan(alpha)``.
    """
    return float(np.clip(10 * np.tan(alpha_min) * base, floor, base))


# ---------------------------------------------------------------- grid search

class PolarSum:
    """``(1/2) sum min(G, rho_E) dtheta`` on a fixed uniform grid of ``[0, pi)``.

    The body is sampled once; each ellipse then costs one vectorised pass.
    The trapezoid rule is spectrally accurate for smooth periodic integrands
    and second order across the kinks at crossings.
    """

    def __init__(self, body, n=POLAR_SAMPLES):
        self.theta = np.arange(n) * (np.pi / n)
        self.G = body.radial(self.theta)
        self.u = np.column_stack([np.cos(self.theta), np.sin(self.theta)])
        self.dtheta = np.pi / n

    def __call__(self, Q):
        rho = 1.0 / np.einsum("ij,jk,ik->i", self.u, Q, self.u)
        # the half turn covers the whole body by central symmetry
        return float(np.sum(np.minimum(self.G, rho)) * self.dtheta)


def _chart_form(a, b, lam):
    t = np.hypot(a, b)
    if t == 0:
        return np.eye(2) * (np.pi / lam)
    c, s = a / t, b / t
    S = np.array([[c, s], [s, -c]])
    # exp(t S) for the involution S
    return (np.cosh(t) * np.eye(2) + np.sinh(t) * S) * (np.pi / lam)


def _evaluate_grid(f, A, B, lam):
    cells = [(a, b) for a in A for b in B]
    vals = parallel_map(lambda ab: f(_chart_form(ab[0], ab[1], lam)), cells)
    return np.array(vals).reshape(len(A), len(B))


def grid_search_mi(body, lam, t_span=1.5, grid=41, level=1e-4, centre=(0.0, 0.0)):
    """Exhaustive search for the MI ellipse of area ``lam``.

    Ellipses are indexed by the chart ``(a, b) = (t cos 2 phi, t sin 2 phi)``
    with form ``(pi / lam) exp([[a, b], [b, -a]])``, which has no coordinate
    singularity at the disk.  A ``grid x grid`` pass over ``centre +
    [-t_span, t_span]^2`` is followed by a second pass of the same size over
    the best cell's neighbourhood.  ``info`` carries the refined argmax, both
    cell sizes and whether the superlevel set ``I >= max - level`` on the
    coarse grid is 8-connected.
    """
    if grid < 21:
        raise ValueError("grid must be at least 21")
    f = PolarSum(body)
    ca, cb = centre
    A = ca + np.linspace(-t_span, t_span, grid)
    B = cb + np.linspace(-t_span, t_span, grid)
    coarse = _evaluate_grid(f, A, B, lam)
    i, j = np.unravel_index(int(np.argmax(coarse)), coarse.shape)
    h = A[1] - A[0]
    labels, count = ndimage.label(coarse >= coarse.max() - level, structure=np.ones((3, 3)))
    A2 = A[i] + np.linspace(-h, h, grid)
    B2 = B[j] + np.linspace(-h, h, grid)
    fine = _evaluate_grid(f, A2, B2, lam)
    k, m = np.unravel_index(int(np.argmax(fine)), fine.shape)
    best = (float(A2[k]), float(B2[m]))
    return OracleEstimate(
        float(fine[k, m]), 0.0, "grid",
        {"argmax": best, "coarse_argmax": (float(A[i]), float(B[j])),
         "cell": float(h), "fine_cell": float(A2[1] - A2[0]),
         "connected": bool(count == 1), "components": int(count),
         "superlevel": labels > 0, "coarse": coarse, "axes": (A, B)},
    )


def superlevel_contains(estimate, chart):
    """Whether ``chart`` lies in a coarse cell of the near-optimal superlevel set."""
    A, B = estimate.info["axes"]
    h = estimate.info["cell"]
    i = int(np.clip(np.rint((chart[0] - A[0]) / h), 0, len(A) - 1))
    j = int(np.clip(np.rint((chart[1] - B[0]) / h), 0, len(B) - 1))
    mask = estimate.info["superlevel"]
    # accept the nearest node or any of its neighbours
    return bool(mask[max(i - 1, 0): i + 2, max(j - 1, 0): j + 2].any())
