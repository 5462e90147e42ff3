"""Random bodies for property tests and experiments."""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from .body import body_from_implicit, body_from_polygon, linear_image
from .errors import MIEllipseError
from .extremal import john_ellipse, loewner_ellipse
from .intersect import find_crossings

_QUARTIC = ("x4", "x3y", "x2y2", "xy3", "y4")


def random_polygon(rng, max_points=7, spread=(0.5, 2.0)):
    """Centrally symmetric polygon: hull of a random cloud and its reflection."""
    while True:
        k = int(rng.integers(2, max_points + 1))
        pts = rng.normal(size=(k, 2)) * rng.uniform(*spread, size=2)
        P = np.vstack([pts, -pts])
        try:
            hull = ConvexHull(P)
        except Exception:  # degenerate (collinear) cloud
            continue
        try:
            return body_from_polygon(P[hull.vertices])
        except MIEllipseError:
            continue


def random_quartic(rng, eccentricity=0.5, strength=0.15):
    """Smooth convex body ``{q2 + q4 <= 1}`` with a random quadratic part of unit determinant."""
    while True:
        t = rng.uniform(0, eccentricity)
        phi = rng.uniform(0, np.pi)
        c, s = np.cos(phi), np.sin(phi)
        R = np.array([[c, -s], [s, c]])
        Q = R @ np.diag([np.exp(t), np.exp(-t)]) @ R.T
        coeffs = {"x2": Q[0, 0], "xy": 2 * Q[0, 1], "y2": Q[1, 1]}
        for key, w in zip(_QUARTIC, (1, 4, 6, 4, 1)):
            coeffs[key] = strength * w * rng.normal() / 4
        try:
            return body_from_implicit(coeffs, resolution=512)
        except MIEllipseError:
            continue


def scaled(body, factor):
    return linear_image(body, factor * np.eye(2))


def in_sandwich_scale(rng, body, margin=0.05):
    """Rescale ``body`` so that ``area(John) < pi < area(Loewner)``.

    The squared scale is drawn log-uniformly from the admissible interval,
    shrunk by ``margin`` at both ends.
    """
    j = john_ellipse(body).ellipse.area
    lo_ = loewner_ellipse(body).ellipse.area
    lo, hi = np.log(np.pi / lo_), np.log(np.pi / j)
    w = hi - lo
    s2 = np.exp(rng.uniform(lo + margin * w, hi - margin * w))
    return scaled(body, np.sqrt(s2))


def transverse_crossings(body, min_alpha=0.0):
    """Crossing set with the unit circle, or ``None`` if tangential or empty."""
    try:
        cs = find_crossings(body)
    except MIEllipseError:
        return None
    if cs.has_tangency or cs.n == 0 or np.min(cs.alpha) <= min_alpha:
        return None
    return cs


def random_thin_body(rng):
    """Thin rhombus-like polygon crossing the unit circle four times."""
    long_ = rng.uniform(1.5, 4.0)
    short = rng.uniform(0.1, 0.6)
    body = body_from_polygon([[long_, 0], [0, short], [-long_, 0], [0, -short]])
    return linear_image(body, np.array([[np.cos(a := rng.uniform(0, np.pi)), -np.sin(a)],
                                        [np.sin(a), np.cos(a)]]))
