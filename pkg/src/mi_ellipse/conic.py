"""Origin-centred ellipses of prescribed area.

An ellipse is stored in canonical chart coordinates ``(t, phi, area)`` with
``t >= 0`` and ``phi`` in ``[0, pi)``; its quadratic form is

    Q = R(phi) diag(e^t pi/area, e^-t pi/area) R(phi)^T,

and the ellipse is ``{x : x^T Q x <= 1}``.  For ``area = pi`` and ``phi = 0``
this is the standard family ``e^t x^2 + e^-t y^2 <= 1``, whose short axis
lies along ``x`` when ``t > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_ZERO_T = 1e-13


def rotation(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def _canonical(t, phi):
    if t < 0:
        t, phi = -t, phi + np.pi / 2
    phi = float(np.mod(phi, np.pi))
    if phi >= np.pi:  # mod can round up to pi
        phi = 0.0
    if t <= _ZERO_T:
        t, phi = 0.0, 0.0
    return float(t), phi


@dataclass(frozen=True)
class CenteredEllipse:
    t: float
    phi: float
    area: float

    def __post_init__(self):
        if not self.area > 0:
            raise ValueError("ellipse area must be positive")
        t, phi = _canonical(float(self.t), float(self.phi))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "area", float(self.area))

    @property
    def form(self):
        k = np.pi / self.area
        R = rotation(self.phi)
        return R @ np.diag([np.exp(self.t) * k, np.exp(-self.t) * k]) @ R.T

    @property
    def semi_axes(self):
        """Semi-axis lengths along the rotated x and y directions."""
        s = np.sqrt(self.area / np.pi)
        return s * np.exp(-self.t / 2), s * np.exp(self.t / 2)

    @property
    def chart(self):
        """Cartesian chart ``(t cos 2 phi, t sin 2 phi)``; smooth through ``t = 0``."""
        return np.array([self.t * np.cos(2 * self.phi), self.t * np.sin(2 * self.phi)])

    @classmethod
    def from_form(cls, Q):
        Q = np.asarray(Q, dtype=float)
        Q = 0.5 * (Q + Q.T)
        w, V = np.linalg.eigh(Q)
        if w[0] <= 0:
            raise ValueError("quadratic form is not positive definite")
        area = np.pi / np.sqrt(w[0] * w[1])
        # eigh sorts ascending; the larger eigenvalue belongs to the short axis
        big = V[:, 1]
        phi = np.arctan2(big[1], big[0])
        t = 0.5 * np.log(w[1] / w[0])
        return cls(t, phi, area)

    @classmethod
    def from_chart(cls, a, b, area=np.pi):
        t = float(np.hypot(a, b))
        phi = 0.5 * float(np.arctan2(b, a)) if t > 0 else 0.0
        return cls(t, phi, area)

    def with_area(self, area):
        return CenteredEllipse(self.t, self.phi, area)

    def contains(self, points, slack=0.0):
        p = np.atleast_2d(points)
        return np.einsum("ij,jk,ik->i", p, self.form, p) <= 1.0 + slack

    def boundary(self, n):
        """``n`` counterclockwise boundary points."""
        th = np.arange(n) * (2 * np.pi / n)
        return np.column_stack([np.cos(th), np.sin(th)]) @ np.linalg.inv(_sqrt_form(self.form)).T

    def to_json(self):
        return {"t": self.t, "phi": self.phi, "area": self.area}

    @classmethod
    def from_json(cls, data):
        if "form" in data:
            e = cls.from_form(data["form"])
            return e
        return cls(float(data.get("t", 0.0)), float(data.get("phi", 0.0)),
                   float(data.get("area", np.pi)))


def standard_ellipse(t):
    """Member ``e^t x^2 + e^-t y^2 <= 1`` of the standard area-pi family."""
    return CenteredEllipse(t, 0.0, np.pi)


def unit_disk():
    return CenteredEllipse(0.0, 0.0, np.pi)


def ellipse_radial(e, theta):
    """Squared radius of the ellipse boundary along the ray at ``theta``."""
    theta = np.asarray(theta, dtype=float)
    k = np.pi / e.area
    d = theta - e.phi
    return 1.0 / (k * (np.exp(e.t) * np.cos(d) ** 2 + np.exp(-e.t) * np.sin(d) ** 2))


def _sqrt_form(Q):
    w, V = np.linalg.eigh(0.5 * (Q + Q.T))
    return (V * np.sqrt(w)) @ V.T


def normalize_to_disk(e):
    """Return ``(L, s)`` with ``det L = 1`` and ``s L`` mapping ``e`` onto the unit disk.

    ``s L`` is the symmetric positive square root of the quadratic form, so
    no rotation is introduced.
    """
    M = _sqrt_form(e.form)
    s = float(np.sqrt(np.sqrt(np.linalg.det(e.form))))
    return M / s, s


def ellipse_distance(e1, e2):
    """Chart distance ``|chart(e1) - chart(e2)|`` between ellipses of equal area."""
    return float(np.linalg.norm(e1.chart - e2.chart))


def form_distance(e1, e2):
    """Affine-invariant distance ``|log(Q1^-1/2 Q2 Q1^-1/2)|_F / sqrt 2``.

    Between ellipses of equal area this is the hyperbolic distance used by
    the solver chart; it reduces to ``|t|`` between the disk and ``E_t``.
    """
    R = np.linalg.inv(_sqrt_form(e1.form))
    w = np.linalg.eigvalsh(R @ e2.form @ R)
    return float(np.sqrt(np.sum(np.log(w) ** 2) / 2))
