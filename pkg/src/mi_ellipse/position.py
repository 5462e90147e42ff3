"""MI position and balanced isotropic measures on the contact circle.

A body is in MI position when the unit disk is its MI ellipse of area pi.
For transverse crossings ``zeta_j = e^{i xi_j}`` this happens exactly when
``sum_odd zeta_j^2 = sum_even zeta_j^2``.  In that case a balanced isotropic
measure lives on the crossings: isotropy of a measure on the unit circle is
the vanishing of ``sum p_j zeta_j^2``, and antipodal symmetry balances it.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InfeasibleHull, NoCrossings, NotStationary, TangencyPresent
from .intersect import CrossingSet, find_crossings
from .variation import residual_D

MI_TOL = 1e-6
QUARTER_TOL = 1e-4
N_TEST_DIRECTIONS = 16


@dataclass(frozen=True)
class PositionReport:
    is_mi: bool
    residual: float
    crossings: CrossingSet
    quarter_turn: bool | None = None

    def to_json(self):
        return {"is_mi": self.is_mi, "residual": self.residual,
                "quarter_turn": self.quarter_turn,
                "crossings": [float(x) for x in self.crossings.xi]}


@dataclass(frozen=True)
class IsotropicMeasure:
    support: np.ndarray
    weights: np.ndarray

    @property
    def balance_residual(self):
        return float(np.abs(np.sum(self.weights * self.support)))

    def isotropy_residual(self, directions=N_TEST_DIRECTIONS):
        phi = np.arange(directions) * (np.pi / directions)
        v = np.exp(1j * phi)
        dots = np.real(self.support[None, :] * np.conj(v[:, None]))
        return float(np.max(np.abs(dots ** 2 @ self.weights - 0.5)))

    def to_json(self):
        return {"support": [float(np.angle(z)) for z in self.support],
                "weights": [float(w) for w in self.weights],
                "balance_residual": self.balance_residual,
                "isotropy_residual": self.isotropy_residual()}


def _quarter_turn_invariant(xi, tol):
    """Whether rotating the crossing angles by pi/2 maps the set onto itself."""
    a = np.sort(np.mod(xi, 2 * np.pi))
    b = np.sort(np.mod(xi + np.pi / 2, 2 * np.pi))
    gap = np.abs(a - b)
    return bool(np.all(np.minimum(gap, 2 * np.pi - gap) <= tol))


def check_mi_position(body, tol=MI_TOL, quarter_tol=QUARTER_TOL):
    """Test whether the unit disk is the MI ellipse of area pi for ``body``."""
    cs = find_crossings(body)
    if cs.has_tangency:
        raise TangencyPresent("boundary is tangent to the unit circle")
    if cs.n == 0:
        raise NoCrossings("boundary does not cross the unit circle")
    residual = abs(residual_D(cs))
    quarter = None
    if cs.n == 1:
        # four transverse crossings never balance
        is_mi = False
    else:
        is_mi = residual <= tol
        if cs.n == 2:
            quarter = _quarter_turn_invariant(cs.xi, quarter_tol)
    return PositionReport(bool(is_mi), float(residual), cs, quarter)


def _barycentric(z, tri):
    """Weights of the origin in the triangle ``z[tri]``, or ``None`` if outside."""
    p = z[list(tri)]
    A = np.array([[p[0].real, p[1].real, p[2].real],
                  [p[0].imag, p[1].imag, p[2].imag],
                  [1.0, 1.0, 1.0]])
    if abs(np.linalg.det(A)) < 1e-12:
        return None
    w = np.linalg.solve(A, [0.0, 0.0, 1.0])
    return w if np.all(w >= -1e-12) else None


def _hull_weights(z):
    """A convex combination of the points ``z`` equal to zero.

    The barycentric solutions of every triangle (and antipodal pair)
    containing the origin are averaged, which spreads the weight and keeps
    the answer deterministic.
    """
    m = len(z)
    if abs(np.mean(z)) <= 1e-12:
        return np.full(m, 1.0 / m)
    sols = []
    for i, j in combinations(range(m), 2):
        # the origin on the segment between z_i and z_j
        if abs(z[i] + z[j]) <= 1e-12 and abs(z[i]) > 0:
            w = np.zeros(m)
            w[[i, j]] = 0.5
            sols.append(w)
    for tri in combinations(range(m), 3):
        b = _barycentric(z, tri)
        if b is not None:
            w = np.zeros(m)
            w[list(tri)] = np.clip(b, 0.0, None)
            sols.append(w / w.sum())
    if not sols:
        raise InfeasibleHull("the origin is not in the hull of the squared crossings")
    return np.mean(sols, axis=0)


def isotropic_weights(cs, tol=MI_TOL):
    """Balanced isotropic probability measure on the crossings.

    Parameters
    ----------
    cs : CrossingSet
        Transverse crossings of an MI-positioned body with the unit circle.
    tol : float
        Largest accepted residual ``|D|``.
    """
    if cs.has_tangency:
        raise TangencyPresent("crossing set contains a tangency")
    if cs.n == 0:
        raise NoCrossings("empty crossing set")
    D = abs(residual_D(cs))
    if D > tol:
        raise NotStationary(f"|D| = {D:.3g} exceeds {tol:.3g}")
    if cs.n < 2:
        raise NotStationary("four crossings cannot be stationary")
    zeta = np.exp(1j * cs.xi)
    half = 2 * cs.n
    w = _hull_weights(zeta[:half] ** 2)
    # antipodal copies carry equal weight, which balances the measure
    p = np.concatenate([w, w]) / 2.0
    m = IsotropicMeasure(zeta, p)
    residual = max(m.balance_residual, m.isotropy_residual())
    if residual > 1e-9:
        raise InfeasibleHull(f"measure residual {residual:.3g} above 1e-9")
    return m


def quarter_turn_orbit(points):
    """All images of ``points`` under rotations by multiples of pi/2."""
    pts = np.asarray(points, dtype=complex)
    return np.concatenate([pts * 1j ** k for k in range(4)])


def parity_sums(zeta):
    """``(sum_odd zeta_j^2, sum_even zeta_j^2)`` with 1-based indices."""
    z2 = np.asarray(zeta) ** 2
    return complex(np.sum(z2[0::2])), complex(np.sum(z2[1::2]))


def converse_counterexample_check(eps=0.3):
    """The quarter-turn orbit of ``{e^-i eps, 1, e^i eps}`` as a crossing pattern.

    Its uniform measure is balanced and isotropic, yet for ``eps != pi/6``
    the parity sums ``2 - 4 cos 2eps`` and ``-2 + 4 cos 2eps`` differ, so the
    pattern is not stationary.  The first crossing sits at angle zero.
    """
    if not 0 < eps < np.pi / 4:
        raise ValueError("eps must lie in (0, pi/4)")
    angles = np.sort(np.mod(np.angle(quarter_turn_orbit(
        np.exp(1j * np.array([-eps, 0.0, eps])))), 2 * np.pi))
    zeta = np.exp(1j * angles)
    m = IsotropicMeasure(zeta, np.full(zeta.size, 1.0 / zeta.size))
    odd, even = parity_sums(zeta)
    expected = 2 - 4 * np.cos(2 * eps)
    D = odd - even
    return {
        "eps": eps,
        "angles": angles,
        "odd_sum": odd,
        "even_sum": even,
        "expected_odd": expected,
        "expected_even": -expected,
        "D": D,
        "balance_residual": m.balance_residual,
        "isotropy_residual": m.isotropy_residual(),
        "isotropic": m.balance_residual <= 1e-12 and m.isotropy_residual() <= 1e-12,
        "stationary": abs(D) <= 1e-12,
    }
