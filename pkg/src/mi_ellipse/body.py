"""Centrally symmetric planar convex bodies seen through their radial function.

Every body exposes ``G(theta) = r(theta)**2``, the squared distance from the
origin to the boundary along the ray at angle ``theta``.  Central symmetry
makes ``G`` pi-periodic, and all evaluations reduce the angle modulo pi
first so that ``G(theta + pi) == G(theta)`` holds bit for bit.

Three sources are supported:

* ``polygon``: counterclockwise, centrally symmetric vertex list.
* ``implicit``: an even bivariate polynomial ``p`` with body ``{p <= 1}``.
* ``radial``: samples of ``G`` on a uniform grid of ``[0, pi)``, joined by
  periodic monotone cubic interpolation.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.linalg import expm

from .errors import (
    NotCentrallySymmetric,
    NotConvex,
    NotUnimodular,
    RayRootNotFound,
    TooFewVertices,
)
from .quadrature import integrate

DEFAULT_GRID = 2048
SYMMETRY_TOL = 1e-9
CONVEXITY_SLACK = 1e-9
RAY_BRACKET = (1e-6, 1e6)
_RAY_NEWTON = 3
_FD_STEP = 1e-6

_MONOMIAL = re.compile(r"^(?:x(\d*))?(?:y(\d*))?$")


def _parse_monomial(key):
    m = _MONOMIAL.match(key)
    if not m or key == "":
        raise ValueError(f"cannot parse monomial {key!r}")
    i = 0 if m.group(1) is None else int(m.group(1) or 1)
    j = 0 if m.group(2) is None else int(m.group(2) or 1)
    return i, j


def _monomial_key(i, j):
    def part(v, n):
        return "" if n == 0 else (v if n == 1 else f"{v}{n}")
    return part("x", i) + part("y", j)


def _mod_pi(theta):
    th = np.mod(np.asarray(theta, dtype=float), np.pi)
    # tiny negative angles round up to exactly pi
    return np.where(th >= np.pi, 0.0, th)


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Immutable centrally symmetric convex body.

    Use :func:`body_from_polygon`, :func:`body_from_implicit` or
    :func:`body_from_radial` rather than the raw constructor; they validate
    the input.
    """

    kind: str
    vertices: np.ndarray | None = None
    coeffs: dict | None = None
    samples: np.ndarray | None = None
    frame: np.ndarray | None = None
    n_grid: int = DEFAULT_GRID
    label: str = field(default="", compare=False)

    # ----------------------------------------------------------- radial view
    def radial(self, theta):
        """Squared radius ``G(theta)``; vectorised over ``theta``."""
        th = _mod_pi(theta)
        if self.kind == "polygon":
            return self._polygon_radial(th)
        if self.kind == "implicit":
            return self._implicit_radial(th)
        return self._radial_samples(th)

    __call__ = radial

    def radial_derivative(self, theta):
        """``dG/dtheta``.

        Closed form for polygons (active edge) and implicit sources
        (implicit differentiation); central differences for sampled ones.
        """
        th = _mod_pi(theta)
        if self.kind == "polygon":
            return self._polygon_radial_derivative(th)
        if self.kind == "implicit":
            return self._implicit_radial_derivative(th)
        return (self.radial(th + _FD_STEP) - self.radial(th - _FD_STEP)) / (2 * _FD_STEP)

    @cached_property
    def grid(self):
        """``G`` sampled on ``n_grid`` uniformly spaced angles of ``[0, pi)``."""
        theta = np.arange(self.n_grid) * (np.pi / self.n_grid)
        return self.radial(theta)

    def kinks(self):
        """Angles in ``[0, pi)`` where ``G`` fails to be smooth."""
        if self.kind == "polygon":
            return np.sort(_mod_pi(np.arctan2(self.vertices[:, 1], self.vertices[:, 0])))
        return np.empty(0)

    @cached_property
    def area(self):
        # area = (1/2) int_0^{2 pi} G = int_0^pi G
        brk = np.concatenate([[0.0], self.kinks(), [np.pi]])
        return integrate(self.radial, brk, atol=1e-13)

    def boundary_points(self, n, include_vertices=False):
        theta = np.arange(n) * (2 * np.pi / n)
        r = np.sqrt(self.radial(theta))
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        if include_vertices and self.kind == "polygon":
            pts = np.vstack([pts, self.vertices])
        return pts

    def max_radius(self):
        if self.kind == "polygon":
            return float(np.sqrt(np.max(np.sum(self.vertices ** 2, axis=1))))
        return float(np.sqrt(np.max(self.grid)))

    def support(self, directions):
        """Support function ``h(u) = max_{x in K} <x, u>`` for unit vectors."""
        u = np.atleast_2d(np.asarray(directions, dtype=float))
        if self.kind == "polygon":
            return np.max(u @ self.vertices.T, axis=1)
        theta, pts = self._dense_boundary
        n = len(theta)
        best = np.argmax(u @ pts.T, axis=1)
        # golden-section refinement of the maximiser around the best sample
        lo = theta[best] - 2 * np.pi / n
        hi = theta[best] + 2 * np.pi / n

        def h(th):
            rr = np.sqrt(self.radial(th))
            return rr * (np.cos(th) * u[:, 0] + np.sin(th) * u[:, 1])

        g = (np.sqrt(5) - 1) / 2
        for _ in range(40):
            x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
            right = h(x2) > h(x1)
            lo = np.where(right, x1, lo)
            hi = np.where(right, hi, x2)
        return np.maximum(h(0.5 * (lo + hi)), np.max(u @ pts.T, axis=1))

    @cached_property
    def _dense_boundary(self):
        n = 8192
        theta = np.arange(n) * (2 * np.pi / n)
        r = np.sqrt(self.radial(theta))
        return theta, np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    # ---------------------------------------------------------------- polygon
    @cached_property
    def _edges(self):
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        normal = np.column_stack([e[:, 1], -e[:, 0]])
        normal /= np.linalg.norm(normal, axis=1)[:, None]
        height = np.einsum("ij,ij->i", normal, v)
        return normal, height

    def _polygon_active(self, th):
        normal, height = self._edges
        c, s = np.cos(th), np.sin(th)
        proj = np.multiply.outer(c, normal[:, 0]) + np.multiply.outer(s, normal[:, 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            dist = np.where(proj > 0, height / proj, np.inf)
        k = np.argmin(dist, axis=-1)
        return k, np.take_along_axis(dist, k[..., None], axis=-1)[..., 0]

    def _polygon_radial(self, th):
        _, r = self._polygon_active(th)
        return r * r

    def _polygon_radial_derivative(self, th):
        normal, height = self._edges
        k, r = self._polygon_active(th)
        n = normal[k]
        proj = n[..., 0] * np.cos(th) + n[..., 1] * np.sin(th)
        dproj = -n[..., 0] * np.sin(th) + n[..., 1] * np.cos(th)
        # G = h^2 / proj^2
        return -2 * height[k] ** 2 * dproj / proj ** 3

    # --------------------------------------------------------------- implicit
    @cached_property
    def _degree_terms(self):
        by_degree = {}
        for (i, j), c in self.coeffs.items():
            by_degree.setdefault(i + j, []).append((i, j, c))
        return sorted(by_degree.items())

    def _ray_coeffs(self, th):
        c, s = np.cos(th), np.sin(th)
        out = []
        for d, terms in self._degree_terms:
            a = np.zeros_like(th)
            for i, j, coef in terms:
                a = a + coef * c ** i * s ** j
            out.append((d, a))
        return out

    def _implicit_radial(self, th):
        th = np.asarray(th, dtype=float)
        shape = th.shape
        th = th.ravel()
        # along a ray p is a polynomial in s = r^2 (all degrees are even)
        m = max(d for d, _ in self._degree_terms) // 2
        C = np.zeros((th.size, m + 1))
        for d, a in self._ray_coeffs(th):
            C[:, d // 2] += a
        C[:, 0] -= 1.0
        s = np.full(th.size, np.inf)
        scale = np.max(np.abs(C), axis=1)
        # effective degree per ray, then batched companion eigenvalues
        live = np.abs(C) > 1e-14 * scale[:, None]
        deg = m - np.argmax(live[:, ::-1], axis=1)
        for k in np.unique(deg):
            rows = np.flatnonzero(deg == k)
            if k == 0:
                continue
            lead = C[rows, k]
            comp = np.zeros((rows.size, k, k))
            comp[:, 0, :] = -C[rows, k - 1::-1] / lead[:, None]
            if k > 1:
                comp[:, np.arange(1, k), np.arange(k - 1)] = 1.0
            roots = np.linalg.eigvals(comp)
            ok = (np.abs(roots.imag) <= 1e-7 * (1 + np.abs(roots.real))) & (roots.real > 0)
            cand = np.where(ok, roots.real, np.inf)
            s[rows] = cand.min(axis=1)
        if not np.all(np.isfinite(s)):
            bad = th[~np.isfinite(s)][0]
            raise RayRootNotFound(f"no boundary point on the ray theta={bad:.6g}")
        powers = np.arange(m + 1)
        for _ in range(_RAY_NEWTON):
            sp = s[:, None] ** powers
            val = np.sum(C * sp, axis=1)
            der = np.sum(C[:, 1:] * powers[1:] * sp[:, :-1], axis=1)
            s = s - np.where(der != 0, val / np.where(der != 0, der, 1.0), 0.0)
        if np.any(s <= RAY_BRACKET[0] ** 2) or np.any(s >= RAY_BRACKET[1] ** 2):
            raise RayRootNotFound(f"boundary outside radii {RAY_BRACKET}")
        return s.reshape(shape)

    def _poly_grad(self, x, y):
        gx = np.zeros_like(x)
        gy = np.zeros_like(x)
        for (i, j), c in self.coeffs.items():
            if i:
                gx = gx + c * i * x ** (i - 1) * y ** j
            if j:
                gy = gy + c * j * x ** i * y ** (j - 1)
        return gx, gy

    def _implicit_radial_derivative(self, th):
        G = self._implicit_radial(th)
        r = np.sqrt(G)
        c, s = np.cos(th), np.sin(th)
        gx, gy = self._poly_grad(r * c, r * s)
        # p(r(th) u(th)) = 1  =>  r' = -r <grad p, u'> / <grad p, u>
        dr = -r * (-gx * s + gy * c) / (gx * c + gy * s)
        return 2 * r * dr

    def polynomial(self, x, y):
        val = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self.coeffs.items():
            val = val + c * x ** i * y ** j
        return val

    # ---------------------------------------------------------------- samples
    @cached_property
    def _interpolant(self):
        n = len(self.samples)
        pad = 3
        idx = np.arange(-pad, n + pad)
        theta = idx * (np.pi / n)
        return PchipInterpolator(theta, self.samples[np.mod(idx, n)])

    def _radial_samples(self, th):
        if self.frame is None:
            return self._interpolant(th)
        inv = np.linalg.inv(self.frame)
        c, s = np.cos(th), np.sin(th)
        wx = inv[0, 0] * c + inv[0, 1] * s
        wy = inv[1, 0] * c + inv[1, 1] * s
        base = self._interpolant(_mod_pi(np.arctan2(wy, wx)))
        return base / (wx * wx + wy * wy)

    # ------------------------------------------------------------------- misc
    def to_json(self):
        if self.kind == "polygon":
            return {"type": "polygon", "vertices": self.vertices.tolist()}
        if self.kind == "implicit":
            return {"type": "implicit",
                    "coeffs": {_monomial_key(i, j): c for (i, j), c in sorted(self.coeffs.items())}}
        if self.frame is not None:
            theta = np.arange(len(self.samples)) * (np.pi / len(self.samples))
            return {"type": "radial", "samples": self.radial(theta).tolist()}
        return {"type": "radial", "samples": self.samples.tolist()}


# ------------------------------------------------------------------ builders
def _check_convex_smooth(body, n=360):
    """Support-line test on ``n`` boundary samples."""
    theta = np.arange(n) * (2 * np.pi / n)
    G = body.radial(theta)
    dG = body.radial_derivative(theta)
    r = np.sqrt(G)
    dr = dG / (2 * r)
    c, s = np.cos(theta), np.sin(theta)
    pts = np.column_stack([r * c, r * s])
    tangent = np.column_stack([dr * c - r * s, dr * s + r * c])
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]])
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    gap = normal @ pts.T - np.einsum("ij,ij->i", normal, pts)[:, None]
    worst = float(np.max(gap))
    if worst > CONVEXITY_SLACK * max(1.0, float(np.max(r))):
        raise NotConvex(f"support-line test violated by {worst:.3e}")


def body_from_polygon(vertices, n_grid=DEFAULT_GRID, label=""):
    """Polygon body from a counterclockwise, centrally symmetric vertex list."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise ValueError("vertices must be a list of (x, y) pairs")
    if len(v) < 4:
        raise TooFewVertices(f"need at least 4 vertices, got {len(v)}")
    if len(v) % 2:
        raise NotCentrallySymmetric("odd vertex count")
    m = len(v) // 2
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(v[m:] + v[:m])) > SYMMETRY_TOL * scale:
        raise NotCentrallySymmetric("vertex k+m is not the reflection of vertex k")
    e = np.roll(v, -1, axis=0) - v
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    if np.any(cross <= 1e-12 * scale ** 2):
        raise NotConvex("vertices are not in strictly convex counterclockwise position")
    # the turning number must be one, otherwise the list winds around twice
    turn = np.sum(np.arctan2(cross, np.einsum("ij,ij->i", e, np.roll(e, -1, axis=0))))
    if abs(turn - 2 * np.pi) > 1e-6:
        raise NotConvex("vertex list winds more than once")
    return ConvexBody("polygon", vertices=v, n_grid=n_grid, label=label)


def _parse_coeffs(coeffs):
    out = {}
    items = coeffs.items() if isinstance(coeffs, dict) else coeffs
    for key, c in items:
        i, j = _parse_monomial(key) if isinstance(key, str) else key
        if (i + j) % 2:
            raise NotCentrallySymmetric(f"odd monomial {_monomial_key(i, j)} breaks p(-x) = p(x)")
        if i + j == 0:
            raise ValueError("constant term not allowed; the body is {p <= 1}")
        if c != 0:
            out[(int(i), int(j))] = out.get((int(i), int(j)), 0.0) + float(c)
    if not out:
        raise ValueError("empty polynomial")
    return out


def body_from_implicit(coeffs, resolution=DEFAULT_GRID, label=""):
    """Body ``{p <= 1}`` for an even polynomial ``p`` given by monomial keys.

    ``coeffs`` maps keys such as ``"x2"``, ``"xy"``, ``"x2y2"`` to floats.
    Along each ray ``p`` is a polynomial in ``r^2``; its smallest positive
    root of ``p = 1`` is the boundary point.
    """
    body = ConvexBody("implicit", coeffs=_parse_coeffs(coeffs), n_grid=resolution, label=label)
    body.grid  # raises RayRootNotFound for unbounded level sets
    _check_convex_smooth(body)
    return body


def body_from_radial(samples, label=""):
    """Body from ``G`` samples on the uniform grid ``k pi / N``, ``k < N``."""
    g = np.asarray(samples, dtype=float)
    if g.ndim != 1 or len(g) < 8:
        raise ValueError("need at least 8 radial samples")
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise ValueError("radial samples must be positive and finite")
    body = ConvexBody("radial", samples=g, n_grid=max(DEFAULT_GRID, len(g)), label=label)
    _check_convex_smooth(body)
    return body


def body_from_json(data):
    kind = data.get("type")
    if kind == "polygon":
        return body_from_polygon(data["vertices"], label=data.get("label", ""))
    if kind == "implicit":
        return body_from_implicit(data["coeffs"], label=data.get("label", ""))
    if kind == "radial":
        return body_from_radial(data["samples"], label=data.get("label", ""))
    raise ValueError(f"unknown body type {kind!r}")


# ---------------------------------------------------------------- transforms
def _homogeneous_transform(terms, degree, inv):
    """Coefficients of ``p_d(inv @ x)`` for a degree-d homogeneous part.

    Homogeneous polynomials are stored as arrays ``h[k]`` = coefficient of
    ``x**k * y**(d-k)``; products are convolutions.
    """
    lin_x = np.array([inv[0, 1], inv[0, 0]])  # (inv x)_1 = a x + b y -> [b, a]
    lin_y = np.array([inv[1, 1], inv[1, 0]])
    out = np.zeros(degree + 1)
    for i, j, c in terms:
        h = np.array([1.0])
        for _ in range(i):
            h = np.convolve(h, lin_x)
        for _ in range(j):
            h = np.convolve(h, lin_y)
        out += c * h
    return {(k, degree - k): float(out[k]) for k in range(degree + 1) if out[k] != 0.0}


def linear_image(body, M):
    """Image ``M K`` of the body under an invertible linear map."""
    M = np.asarray(M, dtype=float)
    if body.kind == "polygon":
        v = body.vertices @ M.T
        if np.linalg.det(M) < 0:
            v = v[::-1]
        return ConvexBody("polygon", vertices=v, n_grid=body.n_grid, label=body.label)
    if body.kind == "implicit":
        inv = np.linalg.inv(M)
        coeffs = {}
        for d, terms in body._degree_terms:
            coeffs.update(_homogeneous_transform(terms, d, inv))
        return ConvexBody("implicit", coeffs=coeffs, n_grid=body.n_grid, label=body.label)
    frame = M if body.frame is None else M @ body.frame
    return ConvexBody("radial", samples=body.samples, frame=frame, n_grid=body.n_grid,
                      label=body.label)


def apply_unimodular(body, L):
    L = np.asarray(L, dtype=float)
    if abs(np.linalg.det(L) - 1.0) > 1e-12:
        raise NotUnimodular(f"det L = {np.linalg.det(L)!r}")
    return linear_image(body, L)


def random_unimodular(rng, magnitude):
    """``expm`` of a random traceless matrix with Frobenius norm ``magnitude``."""
    A = rng.normal(size=(2, 2))
    A -= 0.5 * np.trace(A) * np.eye(2)
    A *= magnitude / np.linalg.norm(A)
    L = expm(A)
    return L / np.sqrt(np.linalg.det(L))


def perturb_general_position(body, magnitude, seed):
    """Push the body through a pseudorandom unimodular map near the identity."""
    if not 0 <= magnitude <= 0.05:
        raise ValueError("magnitude must lie in [0, 0.05]")
    if magnitude == 0:
        return body
    return linear_image(body, random_unimodular(np.random.default_rng(seed), magnitude))


def body_area(body):
    return body.area


def radial(body, theta):
    return body.radial(theta)


def shoelace_area(vertices):
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def builtin_names():
    """Names of the bodies shipped in the ``fixtures`` directory."""
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_body(name):
    """Load a shipped fixture such as ``square`` or ``fig1``."""
    path = resources.files(__package__) / "fixtures" / f"{name}.json"
    if not path.is_file():
        raise ValueError(f"unknown builtin body {name!r}; have {builtin_names()}")
    return body_from_json(json.loads(path.read_text()))


def load_body(ref):
    """Body from a JSON file path, or from a builtin name (optional ``.json``)."""
    p = Path(ref)
    if p.is_file():
        return body_from_json(json.loads(p.read_text()))
    return builtin_body(p.stem if p.suffix == ".json" else ref)
