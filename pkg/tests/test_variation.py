import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mi_ellipse.body import linear_image
from mi_ellipse.errors import DegenerateAngle, DomainError, NoCrossings, TangencyPresent
from mi_ellipse.intersect import CrossingSet, find_crossings
from mi_ellipse.oracle import fd_derivative
from mi_ellipse.samplers import random_polygon, scaled, transverse_crossings
from mi_ellipse.variation import (deriv1, deriv1_pairs, deriv2, deriv2_lower_bound, f_gap, g_form,
                                  hessian, key_certificate, profile, residual_D)

omegas = st.floats(1e-3, np.pi - 1e-3)


def test_strip_values(strip):
    cs = find_crossings(strip)
    assert deriv1(cs) == pytest.approx(-np.sqrt(3) / 2, abs=1e-9)
    assert deriv2(cs) == pytest.approx(1 / (2 * np.sqrt(3)), abs=1e-9)
    assert deriv2_lower_bound(profile(cs)) == pytest.approx(-1 / (2 * np.sqrt(3)), abs=1e-9)
    # zeta^2 alternates between e^{i pi/3} and e^{-i pi/3}
    assert residual_D(cs) == pytest.approx(2j * np.sqrt(3), abs=1e-9)


def test_strip_fd(strip):
    cs = find_crossings(strip)
    assert fd_derivative(strip, 1, 1e-4).value == pytest.approx(deriv1(cs), abs=1e-7)
    assert fd_derivative(strip, 2, 1e-3, extrapolate=True).value == pytest.approx(
        deriv2(cs), abs=1e-5)


@given(omegas, st.floats(-np.pi, np.pi))
def test_pair_form_of_first_derivative(omega, sigma):
    a = np.mod(0.5 * (sigma - omega), np.pi)
    b = a + omega
    if b >= np.pi:
        return
    cs = CrossingSet.from_angles([a, b], [0.5, 0.5])
    assert deriv1(cs) == pytest.approx(deriv1_pairs(profile(cs)), abs=1e-12)


@given(omegas)
def test_f_gap_closed_form(omega):
    # cot(w/2) - sin w = sin w cos w / (1 - cos w)
    want = np.sin(omega) * np.cos(omega) / (1 - np.cos(omega))
    assert f_gap(omega) == pytest.approx(want, rel=1e-9, abs=1e-12)


@given(omegas, st.floats(-np.pi, np.pi))
def test_g_form_extremes(omega, sigma):
    g = g_form(omega, sigma)
    lo, hi = sorted((np.sin(omega), f_gap(omega)))
    assert lo - 1e-12 <= g <= hi + 1e-12


def test_f_gap_domain():
    with pytest.raises(DomainError):
        f_gap(0.0)
    with pytest.raises(DomainError):
        f_gap(np.pi)


def test_errors():
    with pytest.raises(DegenerateAngle):
        deriv2(CrossingSet.from_angles([0.2, 1.0], [1e-9, 0.5]))
    square = random_polygon(np.random.default_rng(0))
    with pytest.raises(NoCrossings):
        deriv1(find_crossings(scaled(square, 100.0)))
    from mi_ellipse.body import load_body
    with pytest.raises(TangencyPresent):
        deriv1(find_crossings(load_body("square")))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_lower_bound_on_polygons(seed):
    rng = np.random.default_rng(seed)
    b = random_polygon(rng)
    b = scaled(b, np.sqrt(np.pi / b.area * rng.uniform(0.7, 1.5)))
    cs = transverse_crossings(b, min_alpha=1e-3)
    if cs is None:
        return
    assert deriv2_lower_bound(profile(cs)) <= -deriv2(cs) + 1e-9


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_hessian_matches_rotated_second_derivative(seed):
    rng = np.random.default_rng(seed)
    b = random_polygon(rng)
    b = scaled(b, np.sqrt(np.pi / b.area * rng.uniform(0.8, 1.3)))
    cs = transverse_crossings(b, min_alpha=1e-3)
    if cs is None:
        return
    grad, H = hessian(cs)
    # rotating the body by -psi turns the a-direction by 2 psi
    psi = 0.3
    R = np.array([[np.cos(-psi), -np.sin(-psi)], [np.sin(-psi), np.cos(-psi)]])
    rot = transverse_crossings(linear_image(b, R), min_alpha=1e-3)
    if rot is None:
        return
    u = np.array([np.cos(2 * psi), np.sin(2 * psi)])
    assert deriv2(rot) == pytest.approx(u @ H @ u, abs=1e-8)
    assert np.linalg.norm(grad) == pytest.approx(abs(residual_D(cs)) / 4, rel=1e-12)


def test_key_certificate(strip):
    cs = find_crossings(strip)
    kc = key_certificate(cs, min(np.pi, strip.area), 2.0, 0.1)
    assert kc.hypothesis_ok and kc.positive
    assert kc.d1 == pytest.approx(-np.sqrt(3) / 2)
    assert not key_certificate(cs, np.pi, np.pi - 0.05, 0.1).hypothesis_ok
