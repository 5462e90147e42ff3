"""Derivatives of the intersection function at the disk frame.

For a body whose boundary crosses the unit circle transversally at
``xi_1 < ... < xi_4n`` (odd indices enter the disk, even indices exit) with
crossing angles ``alpha_j``, the intersection function ``I(t) = area(K n E_t)``
satisfies

    I'(0)  = 1/2 sum_{j<=2n} (-1)^j sin 2 xi_j
   -I''(0) = 1/4 sum_{j<=2n} [(-1)^j sin 4 xi_j + (1 + cos 4 xi_j) / tan alpha_j]

``deriv2`` returns ``I''(0)`` itself, i.e. minus the bracketed sum.  Watch
the sign at call sites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAngle, DomainError, NoCrossings, TangencyPresent

MIN_ALPHA = 1e-6


@dataclass(frozen=True)
class IntersectionProfile:
    """``sigma_i = xi_2i + xi_2i-1`` and ``omega_i = xi_2i - xi_2i-1`` for ``i = 1..n``."""

    sigma: np.ndarray
    omega: np.ndarray
    D: complex


@dataclass(frozen=True)
class KeyCertificate:
    d1: float
    d2: float
    bound: float
    hypothesis_ok: bool
    positive: bool


def _require_transverse(cs):
    if cs.has_tangency:
        raise TangencyPresent("crossing set contains a tangency")
    if len(cs.xi) == 0:
        raise NoCrossings("no transverse crossings with the unit circle")


def _half(cs, shift=0.0):
    """First ``2n`` positions (one half-turn) with signs ``(-1)^j``, ``j`` 1-based."""
    xi = cs.xi[: 2 * cs.n] - shift
    sign = np.where(np.arange(1, xi.size + 1) % 2 == 0, 1.0, -1.0)
    return xi, sign


def deriv1(cs, shift=0.0):
    """``I'(0)``; ``shift`` evaluates the body rotated by ``-shift``."""
    _require_transverse(cs)
    xi, sign = _half(cs, shift)
    return 0.5 * float(np.sum(sign * np.sin(2 * xi)))


def deriv2(cs, shift=0.0):
    """``I''(0)`` (not ``-I''(0)``)."""
    _require_transverse(cs)
    alpha = cs.alpha[: 2 * cs.n]
    if np.any(alpha < MIN_ALPHA):
        raise DegenerateAngle(f"crossing angle {alpha.min():.3g} below {MIN_ALPHA}")
    xi, sign = _half(cs, shift)
    minus = 0.25 * np.sum(sign * np.sin(4 * xi) + (1 + np.cos(4 * xi)) / np.tan(alpha))
    return -float(minus)


def residual_D(cs):
    """``sum_odd zeta_j^2 - sum_even zeta_j^2`` over all ``4n`` crossings."""
    _require_transverse(cs)
    z2 = np.exp(2j * cs.xi)
    odd = np.arange(1, z2.size + 1) % 2 == 1
    return complex(np.sum(z2[odd]) - np.sum(z2[~odd]))


def profile(cs):
    _require_transverse(cs)
    xi = cs.xi
    n = cs.n
    a, b = xi[0: 2 * n: 2], xi[1: 2 * n: 2]
    return IntersectionProfile(sigma=b + a, omega=b - a, D=residual_D(cs))


def f_gap(omega):
    """``cot(omega/2) - sin(omega)`` on ``(0, pi)``."""
    w = np.asarray(omega, dtype=float)
    if np.any((w <= 0) | (w >= np.pi)):
        raise DomainError("omega must lie in (0, pi)")
    out = 1.0 / np.tan(0.5 * w) - np.sin(w)
    return float(out) if out.ndim == 0 else out


def g_form(omega, sigma):
    """``sin(omega) sin^2(sigma) + f(omega) cos^2(sigma)``."""
    s = np.asarray(sigma, dtype=float)
    out = np.sin(omega) * np.sin(s) ** 2 + f_gap(omega) * np.cos(s) ** 2
    return float(out) if np.ndim(out) == 0 else out


def deriv2_lower_bound(prof):
    """Angle-free lower bound ``sum_i g(omega_i, sigma_i) <= -I''(0)``."""
    return float(np.sum(g_form(prof.omega, prof.sigma)))


def deriv1_pairs(prof):
    """``sum_i sin(omega_i) cos(sigma_i)``, the pair form of ``I'(0)``."""
    return float(np.sum(np.sin(prof.omega) * np.cos(prof.sigma)))


def hessian(cs):
    """Second-order data of ``I`` in the chart ``Q = exp([[a, b], [b, -a]])``.

    Returns ``(grad, H)``: the gradient is ``(-Im D / 4, Re D / 4)`` and ``H``
    is assembled from second derivatives along three directions.
    """
    D = residual_D(cs)
    grad = np.array([-0.25 * D.imag, 0.25 * D.real])
    haa = deriv2(cs, 0.0)
    hbb = deriv2(cs, np.pi / 4)
    hdiag = deriv2(cs, np.pi / 8)
    hab = hdiag - 0.5 * (haa + hbb)
    return grad, np.array([[haa, hab], [hab, hbb]])


def key_certificate(cs, area_cap, intersection, eps):
    """Check ``max(|I'(0)|, -I''(0)) > 0`` together with its hypothesis.

    ``area_cap`` is ``min(pi, area K)`` and ``intersection`` is ``I(0)``.
    """
    d1 = deriv1(cs)
    d2 = deriv2(cs)
    bound = deriv2_lower_bound(profile(cs))
    ok = eps <= intersection <= area_cap - eps
    return KeyCertificate(d1=d1, d2=d2, bound=bound, hypothesis_ok=bool(ok),
                          positive=bool(max(abs(d1), -d2) > 0))
