"""Crossings between a body boundary and an ellipse, and intersection areas.

All crossing analysis happens in the frame where the ellipse is the unit
disk: the body is pushed through the symmetric square root of the
ellipse's quadratic form, and the roots of ``h = G - 1`` are located.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._workers import parallel_map
from .body import linear_image
from .conic import CenteredEllipse, normalize_to_disk, standard_ellipse, unit_disk
from .errors import UnresolvedRoot
from .quadrature import integrate

SCAN_INTERVALS = 4096  # over [0, 2 pi); half of them cover [0, pi)
MAX_BISECTIONS = 80
TANGENCY_THRESHOLD = 1e-4
_TOUCH_TOL = 1e-12
_ARC_TOL = 1e-13

ENTER, EXIT, TOUCH = "enter", "exit", "touch"


@dataclass(frozen=True)
class Crossing:
    xi: float
    parity: str
    alpha: float
    tangency_flag: bool = False


@dataclass(frozen=True, eq=False)
class CrossingSet:
    """Cyclically ordered crossings of a body boundary with the unit circle.

    Index 1 (position 0 here) is the enter crossing with the smallest
    ``xi >= 0``; positions are strictly increasing and span less than
    ``2 pi``.  ``containment`` is set only when there are no transverse
    crossings: ``"body_inside"`` (K inside E) or ``"ellipse_inside"``.
    """

    crossings: tuple
    frame: np.ndarray = field(default_factory=lambda: np.eye(2))
    containment: str | None = None

    @property
    def xi(self):
        return np.array([c.xi for c in self.crossings if c.parity != TOUCH])

    @property
    def alpha(self):
        return np.array([c.alpha for c in self.crossings if c.parity != TOUCH])

    @property
    def parities(self):
        return [c.parity for c in self.crossings if c.parity != TOUCH]

    @property
    def n(self):
        return len(self.xi) // 4

    @property
    def has_tangency(self):
        return any(c.tangency_flag for c in self.crossings)

    @property
    def transverse(self):
        return len(self.xi) > 0 and not self.has_tangency

    def __len__(self):
        return len(self.crossings)

    @classmethod
    def from_angles(cls, xi, alpha):
        """Synthetic set from ``2n`` positions in ``[xi_1, xi_1 + pi)`` and their angles.

        The first position is an enter crossing; antipodal copies are added.
        """
        xi = np.asarray(xi, dtype=float)
        alpha = np.asarray(alpha, dtype=float)
        if len(xi) % 2 or len(xi) == 0 or len(xi) != len(alpha):
            raise ValueError("need an even, positive number of positions with matching angles")
        if np.any(np.diff(xi) <= 0) or xi[-1] - xi[0] >= np.pi:
            raise ValueError("positions must increase within a half-turn")
        full_xi = np.concatenate([xi, xi + np.pi])
        full_alpha = np.concatenate([alpha, alpha])
        out = tuple(Crossing(float(x), ENTER if k % 2 == 0 else EXIT, float(a), False)
                    for k, (x, a) in enumerate(zip(full_xi, full_alpha)))
        return cls(out)

    def to_rows(self):
        return [(c.xi, c.parity, c.alpha, c.tangency_flag) for c in self.crossings]


def _frame_map(ellipse):
    L, s = normalize_to_disk(ellipse)
    return s * L


def _frame_body(body, ellipse):
    if ellipse is None:
        return body, np.eye(2)
    M = _frame_map(ellipse)
    if np.allclose(M, np.eye(2), rtol=0, atol=1e-15):
        return body, np.eye(2)
    return linear_image(body, M), M


def _roots_half_turn(body, tol):
    """Roots of ``G - 1`` on ``[0, pi)``.

    Returns ``(xi, side, touch)`` where ``side`` is the sign of ``h`` just
    before each root (+1 means the boundary enters the disk) and ``touch``
    marks double roots found without a sign change.
    """
    n = SCAN_INTERVALS // 2
    theta = np.arange(n + 1) * (np.pi / n)
    h = body.radial(theta) - 1.0
    h[-1] = h[0]
    if np.any(np.convolve(np.abs(h[:-1]) <= _ARC_TOL, np.ones(3), mode="valid") >= 3):
        raise UnresolvedRoot("boundary follows the circle along an arc")

    def hf(x):
        return body.radial(x) - 1.0

    sign = np.sign(h)
    xi, side, touch = [], [], []

    # exact zeros on grid nodes
    prev = np.roll(sign[:-1], 1)
    nxt = sign[1:]
    for k in np.flatnonzero(sign[:-1] == 0):
        before, after = prev[k], nxt[k]
        if before * after < 0:
            xi.append(theta[k]); side.append(before); touch.append(False)
        else:
            xi.append(theta[k]); side.append(before); touch.append(True)

    # sign changes strictly inside intervals
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    if idx.size:
        lo, hi = theta[idx].copy(), theta[idx + 1].copy()
        hlo = h[idx]
        for _ in range(MAX_BISECTIONS):
            if np.max(hi - lo) <= tol:
                break
            mid = 0.5 * (lo + hi)
            hm = hf(mid)
            same = np.sign(hm) == np.sign(hlo)
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        xi.extend(0.5 * (lo + hi)); side.extend(np.sign(hlo)); touch.extend([False] * idx.size)

    # near-misses: local minima of |h| with no sign change
    a = np.abs(h[:-1])
    left, right = np.roll(a, 1), np.roll(a, -1)
    cand = np.flatnonzero((a <= left) & (a <= right) & (a < 1e-2) & (sign[:-1] != 0)
                          & (np.roll(sign[:-1], 1) == sign[:-1]) & (np.roll(sign[:-1], -1) == sign[:-1]))
    g = (np.sqrt(5) - 1) / 2
    for k in cand:
        s = sign[k]
        lo, hi = theta[k] - np.pi / n, theta[k] + np.pi / n
        for _ in range(60):
            x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
            if s * hf(x1) < s * hf(x2):
                hi = x2
            else:
                lo = x1
        xm = 0.5 * (lo + hi)
        hm = float(hf(xm))
        if abs(hm) <= _TOUCH_TOL:
            xi.append(float(np.mod(xm, np.pi))); side.append(s); touch.append(True)
        elif np.sign(hm) != s:
            for a0, b0 in ((theta[k] - np.pi / n, xm), (xm, theta[k] + np.pi / n)):
                l, r = a0, b0
                hl = hf(l)
                for _ in range(MAX_BISECTIONS):
                    if r - l <= tol:
                        break
                    m = 0.5 * (l + r)
                    if np.sign(hf(m)) == np.sign(hl):
                        l = m
                    else:
                        r = m
                xi.append(float(np.mod(0.5 * (l + r), np.pi)))
                side.append(np.sign(hl)); touch.append(False)
    order = np.argsort(xi)
    return (np.asarray(xi, dtype=float)[order], np.asarray(side, dtype=float)[order],
            np.asarray(touch, dtype=bool)[order], h)


def crossings_with_unit_circle(body, tol=1e-10, frame=None):
    xi, side, touch, h = _roots_half_turn(body, tol)
    frame = np.eye(2) if frame is None else frame
    if xi.size == 0 or np.all(touch):
        containment = "ellipse_inside" if np.median(h) > 0 else "body_inside"
    else:
        containment = None
    dG = body.radial_derivative(xi) if xi.size else np.empty(0)
    alpha = np.arctan(np.abs(dG) / 2)
    items = []
    for shift in (0.0, np.pi):
        for x, sd, tc, a, d in zip(xi, side, touch, alpha, dG):
            if tc:
                parity = TOUCH
            else:
                parity = ENTER if sd > 0 else EXIT
            items.append(Crossing(float(x + shift), parity, float(a),
                                  bool(tc or abs(d) < TANGENCY_THRESHOLD)))
    items.sort(key=lambda c: c.xi)
    seq = [c.parity for c in items if c.parity != TOUCH]
    if any(p == q for p, q in zip(seq, seq[1:] + seq[:1])) or len(seq) % 4:
        raise UnresolvedRoot("crossing parities do not alternate at scan resolution")
    if seq:
        first = next(k for k, c in enumerate(items) if c.parity == ENTER)
        items = items[first:] + [Crossing(c.xi + 2 * np.pi, c.parity, c.alpha, c.tangency_flag)
                                 for c in items[:first]]
    return CrossingSet(tuple(items), frame=frame, containment=containment)


def find_crossings(body, ellipse=None, tol=1e-10):
    """Crossings of the body boundary with an ellipse (default: the unit circle)."""
    fb, M = _frame_body(body, ellipse)
    return crossings_with_unit_circle(fb, tol=tol, frame=M)


def _frame_area(fb, tol=1e-12):
    xi, _, _, _ = _roots_half_turn(fb, tol)
    brk = np.concatenate([[0.0], xi, fb.kinks(), [np.pi]])
    return integrate(lambda th: np.minimum(fb.radial(th), 1.0), brk, atol=1e-13)


def intersection_area(body, ellipse=None):
    """``area(K n E)`` by adaptive quadrature of ``min(G, 1)`` in the disk frame."""
    fb, M = _frame_body(body, ellipse)
    return _frame_area(fb) / abs(np.linalg.det(M))


def symdiff_distance(body, ellipse=None):
    """``area(K) + area(E) - 2 area(K n E)``."""
    e = unit_disk() if ellipse is None else ellipse
    return body.area + e.area - 2.0 * intersection_area(body, e)


def symdiff_direct(body, ellipse=None):
    """``(1/2) int |G - rho| dtheta`` in the body's own coordinates.

    Kept independent of the inclusion-exclusion route for cross-checking.
    """
    from .conic import ellipse_radial

    e = unit_disk() if ellipse is None else ellipse
    cs = find_crossings(body, e, tol=1e-13)
    M = cs.frame
    inv = np.linalg.inv(M)
    xi = np.array([c.xi for c in cs.crossings])
    if xi.size:
        w = inv @ np.vstack([np.cos(xi), np.sin(xi)])
        brk_cross = np.mod(np.arctan2(w[1], w[0]), np.pi)
    else:
        brk_cross = np.empty(0)
    brk = np.concatenate([[0.0], brk_cross, body.kinks(), [np.pi]])
    return integrate(lambda th: np.abs(body.radial(th) - ellipse_radial(e, th)), brk, atol=1e-13)


def intersection_profile(t_range, body, steps):
    """Samples ``(t_k, I_K(t_k))`` of the intersection function on a uniform grid."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    t = np.linspace(t_range[0], t_range[1], steps)
    values = parallel_map(lambda tk: intersection_area(body, standard_ellipse(tk)), t)
    return t, np.asarray(values)
