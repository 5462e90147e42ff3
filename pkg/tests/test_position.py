import numpy as np
import pytest
from hypothesis import given, strategies as st

from mi_ellipse.body import body_from_polygon, linear_image
from mi_ellipse.errors import InfeasibleHull, NoCrossings, NotStationary, TangencyPresent
from mi_ellipse.intersect import CrossingSet, find_crossings
from mi_ellipse.position import (IsotropicMeasure, _hull_weights, check_mi_position, converse_counterexample_check,
                                 isotropic_weights, parity_sums, quarter_turn_orbit)
from mi_ellipse.samplers import scaled


def _rotation(a):
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def test_fig1_report(fig1):
    rep = check_mi_position(fig1)
    assert rep.is_mi and rep.quarter_turn
    assert rep.residual <= 1e-12
    assert rep.to_json()["crossings"] == [float(x) for x in rep.crossings.xi]


def test_fig1_uniform_weights(fig1):
    m = isotropic_weights(find_crossings(fig1))
    assert np.allclose(m.weights, 1 / 8)
    assert m.balance_residual <= 1e-12 and m.isotropy_residual() <= 1e-12


@given(st.floats(0, np.pi))
def test_rotation_keeps_position(angle):
    from mi_ellipse.body import load_body
    rep = check_mi_position(linear_image(load_body("fig1"), _rotation(angle)))
    assert rep.is_mi


def test_rectangle_not_in_position(strip):
    rep = check_mi_position(strip)
    assert not rep.is_mi
    assert rep.residual == pytest.approx(2 * np.sqrt(3))
    with pytest.raises(NotStationary):
        isotropic_weights(rep.crossings)


def test_four_crossings_never_mi(rect21):
    rep = check_mi_position(scaled(rect21, 0.8))
    assert rep.crossings.n == 1 and not rep.is_mi and rep.quarter_turn is None


@pytest.mark.parametrize("k, radius", [(3, 1.05), (4, 1.03), (6, 1.01)])
def test_regular_polygons(k, radius):
    th = 0.2 + np.arange(2 * k) * (np.pi / k)
    b = body_from_polygon(radius * np.column_stack([np.cos(th), np.sin(th)]))
    rep = check_mi_position(b)
    assert rep.is_mi
    m = isotropic_weights(rep.crossings)
    assert max(m.balance_residual, m.isotropy_residual()) <= 1e-9
    assert m.weights.sum() == pytest.approx(1.0)


def test_errors(square):
    with pytest.raises(TangencyPresent):
        check_mi_position(square)
    with pytest.raises(NoCrossings):
        check_mi_position(scaled(square, 5.0))


@given(st.lists(st.floats(0, 2 * np.pi), min_size=3, max_size=8))
def test_hull_weights(angles):
    z = np.exp(1j * np.array(angles))
    try:
        w = _hull_weights(z)
    except InfeasibleHull:
        # then some open half-plane holds every point
        gaps = np.diff(np.sort(np.concatenate([np.mod(angles, 2 * np.pi)])))
        wrap = 2 * np.pi - (np.max(np.mod(angles, 2 * np.pi)) - np.min(np.mod(angles, 2 * np.pi)))
        assert max(gaps.max(initial=0.0), wrap) >= np.pi - 1e-6
        return
    assert np.all(w >= 0) and w.sum() == pytest.approx(1.0)
    assert abs(w @ z) <= 1e-9


def test_converse_counterexample():
    c = converse_counterexample_check(0.3)
    assert len(c["angles"]) == 12 and c["angles"][0] == 0.0
    assert abs(c["odd_sum"] - (2 - 4 * np.cos(0.6))) <= 1e-12
    assert abs(c["even_sum"] - (-2 + 4 * np.cos(0.6))) <= 1e-12
    assert c["isotropic"] and not c["stationary"]
    with pytest.raises(ValueError):
        converse_counterexample_check(1.0)


@given(st.floats(0.01, np.pi / 4 - 0.01))
def test_counterexample_family(eps):
    c = converse_counterexample_check(eps)
    assert c["odd_sum"] == pytest.approx(2 - 4 * np.cos(2 * eps), abs=1e-12)
    assert c["isotropic"]


def test_orbit_and_parity():
    pts = quarter_turn_orbit([1.0])
    assert np.allclose(pts, [1, 1j, -1, -1j])
    odd, even = parity_sums(pts)
    assert odd == pytest.approx(2) and even == pytest.approx(-2)
    m = IsotropicMeasure(pts, np.full(4, 0.25))
    assert m.balance_residual <= 1e-15 and m.isotropy_residual() <= 1e-15
