"""Maximal-intersection (MI) ellipses of prescribed area.

Among origin-centred ellipses of area ``lam`` the MI ellipse maximises
``area(K n E)``.  Each iterate is mapped to the unit disk, where the chart
``Q = exp([[a, b], [b, -a]])`` has gradient ``(-Im D / 4, Re D / 4)`` at the
origin, ``D`` being the crossing residual, and the Hessian comes from the
second-derivative formula along three directions.  Quasiconcavity of the
intersection function along every chart line makes plain ascent globally
convergent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ._workers import parallel_map
from .body import linear_image
from .conic import CenteredEllipse, normalize_to_disk
from .errors import LambdaOutOfRange, NoConvergence, UnresolvedRoot
from .extremal import john_ellipse, loewner_ellipse
from .intersect import find_crossings, intersection_area, intersection_profile
from .variation import hessian, residual_D

TOL = 1e-7
MAX_ITER = 500
MIN_STEP = 1e-10
MAX_STEP = 0.5
ARMIJO = 0.1
SHRINK = 0.5
# relative slack when testing lam against the sandwich and its endpoints
ENDPOINT_RTOL = 1e-9
# orientation factor of the phi-direction, calibrated by finite differences
CHART_SIGN = -1.0


@dataclass(frozen=True)
class MIResult:
    ellipse: CenteredEllipse
    intersection: float
    residual: float
    concavity: tuple
    iterations: int
    lam: float

    def to_json(self):
        return {"ellipse": self.ellipse.to_json(), "lambda": self.lam,
                "intersection": self.intersection, "residual": self.residual,
                "concavity": list(self.concavity), "iterations": self.iterations}


def chart_gradient(D):
    """Gradient of ``I`` in the disk-frame chart from the residual ``D``."""
    return np.array([-0.25 * D.imag, CHART_SIGN * -0.25 * D.real])


def _chart_matrix(delta):
    a, b = delta
    return expm(np.array([[a, b], [b, -a]]))


def _moved(M, delta, area):
    """Ellipse whose disk-frame image is ``{x^T exp(S) x <= 1}``."""
    return CenteredEllipse.from_form(M.T @ _chart_matrix(delta) @ M).with_area(area)


def sandwich_range(body, tol=TOL):
    """``(John, Loewner)`` extremal results bounding the admissible areas."""
    return john_ellipse(body, tol), loewner_ellipse(body, tol)


class _Problem:
    def __init__(self, body, lam):
        self.body = body
        self.lam = lam
        self.evals = 0

    def area(self, e):
        self.evals += 1
        return intersection_area(self.body, e)


def _golden_axis(prob, M, axis, width, f0, iters=40):
    """Derivative-free maximisation of ``I`` along one chart axis."""
    g = 0.5 * (np.sqrt(5.0) - 1.0)
    unit = np.eye(2)[axis]
    lo, hi = -width, width
    a, b = hi - g * (hi - lo), lo + g * (hi - lo)
    fa = prob.area(_moved(M, a * unit, prob.lam))
    fb = prob.area(_moved(M, b * unit, prob.lam))
    for _ in range(iters):
        if fa > fb:
            hi, b, fb = b, a, fa
            a = hi - g * (hi - lo)
            fa = prob.area(_moved(M, a * unit, prob.lam))
        else:
            lo, a, fa = a, b, fb
            b = lo + g * (hi - lo)
            fb = prob.area(_moved(M, b * unit, prob.lam))
    x = 0.5 * (lo + hi)
    fx = prob.area(_moved(M, x * unit, prob.lam))
    return (x * unit, fx) if fx > f0 else (np.zeros(2), f0)


def _step(prob, e, f0, cs):
    """One ascent step from ``e``; returns ``(new ellipse, new value, |step|)``."""
    L, s = normalize_to_disk(e)
    M = s * L
    grad = chart_gradient(residual_D(cs))
    _, H = hessian(cs)
    if np.all(np.linalg.eigvalsh(H) < 0):
        direction = -np.linalg.solve(H, grad)
    else:
        direction = grad
    norm = np.linalg.norm(direction)
    if norm > MAX_STEP:
        direction *= MAX_STEP / norm
    slope = float(grad @ direction)
    # the disk frame scales areas by s^2
    scale = s * s
    D0 = abs(residual_D(cs))
    step = 1.0
    while step * np.linalg.norm(direction) > MIN_STEP:
        cand = _moved(M, step * direction, prob.lam)
        f = prob.area(cand)
        gain = (f - f0) * scale
        if gain >= ARMIJO * step * slope:
            return cand, f, step * np.linalg.norm(direction)
        # near the optimum the predicted gain drops below quadrature noise;
        # fall back to the residual, which is accurate there
        if step * slope < 1e-11:
            try:
                c2 = find_crossings(prob.body, cand)
                if not c2.has_tangency and c2.n and abs(residual_D(c2)) < D0:
                    return cand, max(f, f0), step * np.linalg.norm(direction)
            except UnresolvedRoot:
                pass
        step *= SHRINK
    return e, f0, 0.0


def _concavity(prob, e, cs, h=1e-3):
    """Second derivatives of ``I`` along the two chart axes at ``e``."""
    if cs is not None and cs.n and not cs.has_tangency:
        _, H = hessian(cs)
        return float(H[0, 0]), float(H[1, 1])
    L, s = normalize_to_disk(e)
    M = s * L
    f0 = prob.area(e)
    out = []
    for axis in range(2):
        u = np.eye(2)[axis] * h
        fp, fm = prob.area(_moved(M, u, prob.lam)), prob.area(_moved(M, -u, prob.lam))
        out.append(float((fp - 2 * f0 + fm) / h ** 2 * s * s))
    return tuple(out)


def _initial_guesses(body, lam, john, loewner):
    w = (lam - john.ellipse.area) / max(loewner.ellipse.area - john.ellipse.area, 1e-300)
    mix = (1 - w) * john.ellipse.chart + w * loewner.ellipse.chart
    return [CenteredEllipse(0.0, 0.0, lam), CenteredEllipse.from_chart(*mix, area=lam),
            john.ellipse.with_area(lam), loewner.ellipse.with_area(lam)]


def mi_ellipse(body, lam, tol=TOL, start=None, extremal=None, max_iter=MAX_ITER):
    """MI ellipse of area ``lam`` for ``body``.

    Parameters
    ----------
    body : ConvexBody
    lam : float
        Target area, within ``[area John, area Loewner]``.
    tol : float
        Stop once the crossing residual ``|D|`` is at most ``tol``.
    start : CenteredEllipse, optional
        Warm start; its area is reset to ``lam``.
    extremal : tuple, optional
        Precomputed ``(john, loewner)`` results.

    Returns
    -------
    MIResult
    """
    john, loewner = extremal if extremal is not None else sandwich_range(body)
    lo, hi = john.ellipse.area, loewner.ellipse.area
    if not lo * (1 - ENDPOINT_RTOL) <= lam <= hi * (1 + ENDPOINT_RTOL):
        raise LambdaOutOfRange(f"lambda={lam:.10g} outside [{lo:.10g}, {hi:.10g}]")
    prob = _Problem(body, lam)
    # the endpoints are the extremal ellipses themselves
    for end in (john, loewner):
        if abs(lam - end.ellipse.area) <= ENDPOINT_RTOL * end.ellipse.area:
            e = end.ellipse
            return MIResult(e, prob.area(e), 0.0, (0.0, 0.0), 0, lam)

    guesses = [start.with_area(lam)] if start is not None else _initial_guesses(body, lam, john, loewner)
    values = [prob.area(g) for g in guesses]
    k = int(np.argmax(values))
    e, f = guesses[k], values[k]
    width = 0.5
    cs = None
    for it in range(1, max_iter + 1):
        try:
            cs = find_crossings(body, e)
        except UnresolvedRoot:
            cs = None
        if cs is not None and cs.n == 0 and not cs.has_tangency:
            # containment both ways is impossible strictly inside the sandwich
            residual = 0.0
            break
        if cs is None or cs.has_tangency:
            L, s = normalize_to_disk(e)
            M = s * L
            moved = False
            for axis in range(2):
                delta, f_new = _golden_axis(prob, M, axis, width, f)
                if np.any(delta):
                    e, f, moved = _moved(M, delta, lam), f_new, True
                    L, s = normalize_to_disk(e)
                    M = s * L
            width = width if moved else 0.5 * width
            if width < MIN_STEP:
                raise NoConvergence("stuck at a tangency")
            continue
        residual = abs(residual_D(cs))
        if residual <= tol:
            break
        e, f, size = _step(prob, e, f, cs)
        if size <= MIN_STEP:
            break
    else:
        raise NoConvergence(f"no convergence in {max_iter} iterations (|D|={residual:.3g})")
    return MIResult(e, f, float(residual), _concavity(prob, e, cs), it, lam)


def _lambda_grid(john, loewner, steps):
    if steps < 2:
        raise ValueError("steps must be at least 2")
    return np.linspace(john.ellipse.area, loewner.ellipse.area, steps)


def mi_family(body, steps, tol=TOL, extremal=None):
    """MI ellipses for ``steps`` areas spread uniformly across the sandwich.

    A sequential coarse pass warm-starts each area from its neighbour; the
    refinement to ``tol`` then runs in parallel.
    """
    john, loewner = extremal if extremal is not None else sandwich_range(body)
    lams = _lambda_grid(john, loewner, steps)
    if loewner.ellipse.area - john.ellipse.area <= ENDPOINT_RTOL * john.ellipse.area:
        r = mi_ellipse(body, john.ellipse.area, tol, extremal=(john, loewner))
        return [(float(lam), r) for lam in lams]
    coarse = []
    prev = None
    for lam in lams:
        r = mi_ellipse(body, lam, 1e-4, start=prev, extremal=(john, loewner))
        coarse.append(r)
        prev = r.ellipse
    fine = parallel_map(lambda item: mi_ellipse(body, item[0], tol, start=item[1].ellipse,
                                                extremal=(john, loewner)),
                        list(zip(lams, coarse)))
    return [(float(lam), r) for lam, r in zip(lams, fine)]


def family_hausdorff(family, n=720):
    """Hausdorff distances between consecutive ellipse boundaries."""
    out = []
    for (_, a), (_, b) in zip(family, family[1:]):
        pa, pb = a.ellipse.boundary(n), b.ellipse.boundary(n)
        d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
        out.append(float(max(d.min(axis=1).max(), d.min(axis=0).max())))
    return np.array(out)


def _polygonized(body, n):
    if body.kind == "polygon":
        return np.asarray(body.vertices, dtype=float)
    return body.boundary_points(n)


def displaced_center_check(body, lam, grid=21, radius=0.5, n=256, result=None):
    """Compare ``area(K n (M + v))`` over centre offsets ``|v_i| <= radius``.

    Both shapes are replaced by centrally symmetric polygons (the body by
    ``n`` boundary samples unless it is a polygon), so the comparison is
    between consistent discretisations.
    """
    from .oracle import clip_area

    john, loewner = sandwich_range(body)
    if not john.ellipse.area < lam < loewner.ellipse.area:
        raise LambdaOutOfRange("lambda must lie strictly inside the sandwich")
    res = result if result is not None else mi_ellipse(body, lam, extremal=(john, loewner))
    K = _polygonized(body, n)
    E = res.ellipse.boundary(4096)
    offsets = np.linspace(-radius, radius, grid)
    cells = [(i, j) for i in range(grid) for j in range(grid)]

    def area(ij):
        v = np.array([offsets[ij[0]], offsets[ij[1]]])
        return clip_area(E + v, K).value

    values = np.array(parallel_map(area, cells)).reshape(grid, grid)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    centre = int(np.argmin(np.abs(offsets)))
    step = offsets[1] - offsets[0] if grid > 1 else 0.0
    best_v = np.array([offsets[i], offsets[j]])
    at_zero = values[centre, centre]
    return {
        "lambda": float(lam),
        "argmax": best_v.tolist(),
        "max_area": float(values[i, j]),
        "area_at_zero": float(at_zero),
        "excess": float(values.max() - at_zero),
        "within_cell": bool(np.all(np.abs(best_v) <= step + 1e-12)),
        "ok": bool(values.max() <= at_zero + 1e-6),
        "values": values,
    }


def quasiconcavity_probe(body, frame=None, t_range=(-2.0, 2.0), steps=81, lam=np.pi):
    """Sample ``I`` along the chart line ``t -> frame^-1 E_t`` and audit it.

    Violating triples ``t0 < t1 < t2`` with ``I(t1) <= min(I(t0), I(t2)) + 1e-9``
    are searched among samples with ``I < min(lam, area K) - 1e-6``.
    """
    if steps < 3:
        raise ValueError("steps must be at least 3")
    L = np.eye(2) if frame is None else np.asarray(frame, dtype=float)
    fb = linear_image(body, L)
    if lam != np.pi:
        # rescale so that the family has area pi
        fb = linear_image(fb, np.sqrt(np.pi / lam) * np.eye(2))
    t, I = intersection_profile(t_range, fb, steps)
    cap = min(np.pi, fb.area)
    keep = I < cap - 1e-6
    tk, Ik = t[keep], I[keep]
    violations = []
    if Ik.size >= 3:
        left = np.maximum.accumulate(Ik)
        right = np.maximum.accumulate(Ik[::-1])[::-1]
        for k in range(1, Ik.size - 1):
            # the best witnesses are the largest values on either side
            i0 = int(np.argmax(Ik[:k]))
            i2 = k + 1 + int(np.argmax(Ik[k + 1:]))
            if Ik[k] <= min(left[k - 1], right[k + 1]) + 1e-9:
                violations.append((float(tk[i0]), float(tk[k]), float(tk[i2])))
    top = int(np.argmax(I))
    d = np.diff(I)
    unimodal = bool(np.all(d[:top] >= -1e-9) and np.all(d[top:] <= 1e-9))
    return {"t": t, "I": I, "violations": violations, "argmax": float(t[top]),
            "unimodal": unimodal, "admissible": int(keep.sum())}
