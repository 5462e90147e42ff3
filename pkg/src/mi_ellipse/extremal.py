"""John (largest inscribed) and Loewner (smallest circumscribed) ellipses.

Both are origin-centred for centrally symmetric bodies.  The Loewner
ellipse of a boundary sample is the fixed-centre minimum-volume enclosing
ellipse, found by a Khachiyan-type multiplicative update on design weights
(with away steps, which makes convergence linear).  Smooth bodies are
handled by exchanging a small set of refined contact points instead of
iterating on a dense sample, where the weights spread over many nearly
active points and convergence crawls.  The John ellipse comes
from polar duality: ``John(K)`` is the polar of ``Loewner(K polar)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, nnls

from .body import ConvexBody, body_from_polygon
from .conic import CenteredEllipse, ellipse_radial
from .errors import IterationLimit

SAMPLES = 720
VERIFY = 2880
ACTIVE_TOLS = (1e-4, 1e-6, 1e-8, 1e-10)
SLACK = 1e-7


@dataclass(frozen=True)
class ExtremalResult:
    ellipse: CenteredEllipse
    kind: str
    optimality_gap: float


def _khachiyan(P, tol, max_iter):
    d = 2
    u = np.full(len(P), 1.0 / len(P))
    for _ in range(max_iter):
        X = (P * u[:, None]).T @ P
        m = np.einsum("ij,jk,ik->i", P, np.linalg.inv(X), P)
        j = int(np.argmax(m))
        active = np.flatnonzero(u > 0)
        k = active[np.argmin(m[active])]
        up, down = m[j] / d - 1.0, 1.0 - m[k] / d
        if up <= tol:
            break
        if up >= down:
            step = (m[j] - d) / (d * (m[j] - 1.0))
            u *= 1.0 - step
            u[j] += step
        else:
            drop = u[k] / (1.0 - u[k])
            step = drop if m[k] <= 1.0 else min((d - m[k]) / (d * (m[k] - 1.0)), drop)
            u *= 1.0 + step
            u[k] -= step
            u[k] = max(u[k], 0.0)
    else:
        raise IterationLimit("Khachiyan iteration did not reach tolerance")
    X = (P * u[:, None]).T @ P
    return np.linalg.inv(d * X), u


def _polish(Q, P):
    """Solve ``min -log det Q`` s.t. ``x_i^T Q x_i <= 1`` from a nearby start.

    In the entries ``(p, q, r)`` of ``Q`` the constraints are linear and the
    objective is smooth and convex, so SLSQP lands on the exact active set.
    """
    A = np.column_stack([P[:, 0] ** 2, 2 * P[:, 0] * P[:, 1], P[:, 1] ** 2])
    x0 = np.array([Q[0, 0], Q[0, 1], Q[1, 1]]) / float(np.max(_quad(Q, P)))

    def obj(z):
        det = z[0] * z[2] - z[1] ** 2
        return -np.log(det) if det > 0 else np.inf

    def grad(z):
        det = z[0] * z[2] - z[1] ** 2
        return -np.array([z[2], -2 * z[1], z[0]]) / det

    res = minimize(obj, x0, jac=grad, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": lambda z: 1.0 - A @ z,
                                 "jac": lambda z: -A}],
                   options={"ftol": 1e-15, "maxiter": 500})
    Q0 = np.array([[x0[0], x0[1]], [x0[1], x0[2]]])
    if not np.isfinite(obj(res.x)):
        return Q0
    Qn = np.array([[res.x[0], res.x[1]], [res.x[1], res.x[2]]])
    Qn = Qn / max(float(np.max(_quad(Qn, P))), 1.0)
    # SLSQP can stop on a worse point than its start
    return Qn if np.linalg.det(Qn) >= np.linalg.det(Q0) else Q0


def _lower_bound(u, P):
    """Dual lower bound ``pi sqrt(det 2X)`` on the optimal area.

    For weights ``u`` on the simplex and ``X = sum u_i x_i x_i^T``, every
    feasible ``Q`` has ``tr(QX) <= 1``, hence ``det Q <= 1 / det(2X)``.
    """
    if u.sum() <= 0:
        return 0.0
    X = (P * (u / u.sum())[:, None]).T @ P
    det = np.linalg.det(2.0 * X)
    return np.pi * np.sqrt(det) if det > 1e-300 else 0.0


def _nnls_weights(Q, P, active_tol=1e-6):
    """Weights on nearly active points fitted to ``sum u_i x_i x_i^T = Q^-1 / 2``."""
    act = _quad(Q, P) >= 1.0 - active_tol
    u = np.zeros(len(P))
    if act.sum() < 2:
        return u
    A = P[act]
    Qi = np.linalg.inv(Q) / 2.0
    w, _ = nnls(np.vstack([A[:, 0] ** 2, A[:, 0] * A[:, 1], A[:, 1] ** 2, np.ones(len(A))]),
                np.array([Qi[0, 0], Qi[0, 1], Qi[1, 1], 1.0]))
    if w.sum() > 0:
        u[act] = w / w.sum()
    return u


def _nnls_designs(Q, P):
    # any simplex weights give a valid bound, so try several active sets
    return [_nnls_weights(Q, P, a) for a in ACTIVE_TOLS]


def _gap(Q, P, *weights):
    area = np.pi / np.sqrt(np.linalg.det(Q))
    lower = max(_lower_bound(u, P) for u in weights)
    return max(area / lower - 1.0, 0.0) if lower > 0 else np.inf


def centered_mvee(points, tol=1e-7, max_iter=200_000):
    """Minimum-area origin-centred ellipse containing ``points``.

    Returns ``(Q, gap)`` where the ellipse is ``{x : x^T Q x <= 1}`` and
    ``gap`` bounds the relative area excess over the optimum, from a dual
    feasible design.
    """
    P = np.asarray(points, dtype=float)
    Q0, u = _khachiyan(P, 1e-4, max_iter)
    Q = _polish(Q0, P)
    gap = _gap(Q, P, u, *_nnls_designs(Q, P))
    if gap > tol:
        Q0, u = _khachiyan(P, tol, max_iter)
        Q = _polish(Q0, P)
        gap = _gap(Q, P, u, *_nnls_designs(Q, P))
    return Q, gap


def _scaled_to_contain(Q, points):
    worst = float(np.max(np.einsum("ij,jk,ik->i", points, Q, points)))
    return Q / worst


def _quad(Q, P):
    return np.einsum("ij,jk,ik->i", P, Q, P)


def _refine_maxima(curve, Q, theta, m, rel=0.05, iters=60):
    """Golden-section refine each local maximum of ``x(theta)^T Q x(theta)``."""
    step = theta[1] - theta[0]
    peak = (m >= np.roll(m, 1)) & (m >= np.roll(m, -1)) & (m >= (1.0 - rel) * m.max())
    lo, hi = theta[peak] - step, theta[peak] + step
    g = 0.5 * (np.sqrt(5.0) - 1.0)
    a, b = hi - g * (hi - lo), lo + g * (hi - lo)
    fa, fb = _quad(Q, curve(a)), _quad(Q, curve(b))
    for _ in range(iters):
        left = fa > fb
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
        a_new = np.where(left, hi - g * (hi - lo), b)
        b_new = np.where(left, a, lo + g * (hi - lo))
        a, b = a_new, b_new
        fa, fb = _quad(Q, curve(a)), _quad(Q, curve(b))
    return curve(0.5 * (a + b))


def _exchange_mvee(curve, tol, samples, rounds=40):
    """Minimum-area centred ellipse around a closed symmetric curve.

    Khachiyan on a coarse sample locates the contact region; each round then
    adds the refined maximisers of the current quadratic form to a small
    working set and re-solves on that set only.
    """
    # central symmetry: half a turn of samples carries the full design
    theta = np.arange(samples) * (np.pi / samples)
    pts = curve(theta)
    Q, _ = centered_mvee(pts, tol=1e-3)
    work = np.empty((0, 2))
    gap = np.inf
    for _ in range(rounds):
        cand = _refine_maxima(curve, Q, theta, _quad(Q, pts))
        worst = float(np.max(_quad(Q, cand)))
        if work.shape[0] and worst <= 1.0 + tol:
            break
        work = np.vstack([work, cand])
        Q, gap = centered_mvee(work, tol=tol)
    else:
        raise IterationLimit("contact-point exchange did not settle")
    return _scaled_to_contain(Q, np.vstack([pts, cand, work])), max(gap, 0.0)


def _radial_curve(body):
    def curve(th):
        r = np.sqrt(body.radial(th))
        return np.column_stack([r * np.cos(th), r * np.sin(th)])
    return curve


def _polar_curve(body):
    """Polar boundary parametrised by the boundary angle of a C^1 body.

    At ``x = r u`` the outward normal is ``r u - r' u_perp`` and
    ``<x, n> = r^2``, so the polar point is ``(u - G'/(2G) u_perp) / sqrt(G)``.
    """
    def curve(th):
        G = body.radial(th)
        k = body.radial_derivative(th) / (2.0 * G)
        c, s = np.cos(th), np.sin(th)
        return np.column_stack([c + k * s, s - k * c]) / np.sqrt(G)[:, None]
    return curve


def loewner_ellipse(body, tol=1e-7, samples=SAMPLES):
    """Smallest origin-centred ellipse containing the body."""
    if body.kind == "polygon":
        # an ellipse contains a polygon iff it contains the vertices
        pts = body.vertices
        Q, gap = centered_mvee(pts, tol=tol)
        Q = _scaled_to_contain(Q, pts)
    else:
        Q, gap = _exchange_mvee(_radial_curve(body), tol, samples)
    fine = body.boundary_points(VERIFY, include_vertices=True)
    worst = float(np.max(_quad(Q, fine)))
    if worst > 1.0:
        Q = Q / worst
    return ExtremalResult(CenteredEllipse.from_form(Q), "loewner", float(gap))


def polar_points(body, n=SAMPLES):
    """Boundary points ``u / h_K(u)`` of the polar body.

    Polygons contribute their exact polar vertices, the scaled edge normals.
    """
    if body.kind == "polygon":
        normal, height = body._edges
        return normal / height[:, None]
    theta = np.arange(n) * (2 * np.pi / n)
    return _polar_curve(body)(theta)


def polar_body(body):
    """Polar body; exact for polygons, radial samples otherwise."""
    if body.kind == "polygon":
        normal, height = body._edges
        # edge k's dual vertex; consecutive edges give consecutive vertices
        return body_from_polygon(normal / height[:, None])
    from .body import body_from_radial

    n = body.n_grid
    theta = np.arange(n) * (np.pi / n)
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    return body_from_radial(1.0 / body.support(u) ** 2)


def john_ellipse(body, tol=1e-7, samples=SAMPLES):
    """Largest origin-centred ellipse inside the body, via the polar body."""
    if body.kind == "polygon":
        pts = polar_points(body)
        Qp, gap = centered_mvee(pts, tol=tol)
        Qp = _scaled_to_contain(Qp, pts)
    else:
        Qp, gap = _exchange_mvee(_polar_curve(body), tol, samples)
    Q = np.linalg.inv(Qp)
    e = CenteredEllipse.from_form(Q)
    theta = np.arange(VERIFY) * (2 * np.pi / VERIFY)
    theta = np.concatenate([theta, body.kinks()])
    worst = float(np.max(ellipse_radial(e, theta) / body.radial(theta)))
    if worst > 1.0:
        Q = Q * worst
    return ExtremalResult(CenteredEllipse.from_form(Q), "john", float(gap))


def sandwich(body, tol=1e-7):
    """``(area John, area Loewner)``."""
    return john_ellipse(body, tol).ellipse.area, loewner_ellipse(body, tol).ellipse.area
