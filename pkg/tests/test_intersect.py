import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mi_ellipse.body import apply_unimodular, load_body, random_unimodular
from mi_ellipse.conic import CenteredEllipse, standard_ellipse, unit_disk
from mi_ellipse.errors import UnresolvedRoot
from mi_ellipse.intersect import (CrossingSet, find_crossings, intersection_area,
                                  intersection_profile, symdiff_direct, symdiff_distance)


def test_square_contains_disk(square):
    cs = find_crossings(square)
    # the inscribed disk touches the four edge midpoints
    assert cs.n == 0 and cs.has_tangency and len(cs) == 4
    assert cs.containment == "ellipse_inside"
    assert intersection_area(square) == pytest.approx(np.pi, rel=1e-12)


def test_strip_crossings(strip):
    cs = find_crossings(strip)
    assert np.allclose(cs.xi, np.array([1, 5, 7, 11]) * np.pi / 6, rtol=0, atol=1e-10)
    assert cs.parities[0] != cs.parities[1]
    # area of the unit disk cut to |y| <= 1/2
    want = 2 * (np.arcsin(0.5) + 0.5 * np.cos(np.arcsin(0.5)))
    assert intersection_area(strip) == pytest.approx(want, rel=1e-12)


def test_fig1_eight_crossings(fig1):
    cs = find_crossings(fig1)
    assert len(cs.xi) == 8 and cs.transverse
    assert np.all(np.diff(cs.xi) > 0) and cs.xi[-1] - cs.xi[0] < 2 * np.pi
    assert np.allclose(fig1.radial(cs.xi), 1.0, atol=1e-10)


def test_containment_labels():
    disk = load_body("disk")
    assert find_crossings(disk, CenteredEllipse(0, 0, 4.0)).containment == "body_inside"
    assert find_crossings(disk, CenteredEllipse(0, 0, 2.0)).containment == "ellipse_inside"
    assert intersection_area(disk, CenteredEllipse(0, 0, 2.0)) == pytest.approx(2.0, rel=1e-12)


def test_coincident_boundary_rejected():
    with pytest.raises(UnresolvedRoot):
        find_crossings(load_body("disk"))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.05, 1.0))
def test_unimodular_invariance(seed, magnitude):
    rng = np.random.default_rng(seed)
    L = random_unimodular(rng, magnitude)
    body = load_body("rect21")
    e = CenteredEllipse(0.5, 0.2, 5.0)
    moved = CenteredEllipse.from_form(np.linalg.inv(L).T @ e.form @ np.linalg.inv(L))
    assert intersection_area(apply_unimodular(body, L), moved) == pytest.approx(
        intersection_area(body, e), rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(0, np.pi), st.floats(1.0, 12.0))
def test_symdiff_routes_agree(t, phi, area):
    body = load_body("rect21")
    e = CenteredEllipse(t, phi, area)
    assert symdiff_distance(body, e) == pytest.approx(symdiff_direct(body, e), abs=1e-9)


def test_area_bounded(fig1):
    t, I = intersection_profile((-1.0, 1.0), fig1, 9)
    assert np.all(I <= min(np.pi, fig1.area) + 1e-12)
    assert np.argmax(I) == 4  # the disk is optimal for fig1


def test_from_angles():
    cs = CrossingSet.from_angles([0.2, 1.0], [0.5, 0.6])
    assert np.allclose(cs.xi, [0.2, 1.0, 0.2 + np.pi, 1.0 + np.pi])
    assert cs.n == 1
    with pytest.raises(ValueError):
        CrossingSet.from_angles([1.0, 0.2], [0.5, 0.6])
    with pytest.raises(ValueError):
        CrossingSet.from_angles([0.2], [0.5])


def test_profile_requires_steps(fig1):
    with pytest.raises(ValueError):
        intersection_profile((-1, 1), fig1, 1)


def test_ellipse_frame(rect21):
    e = standard_ellipse(0.3)
    cs = find_crossings(rect21, e)
    # crossings are reported in the frame where e is the unit disk
    pts = np.column_stack([np.cos(cs.xi), np.sin(cs.xi)]) @ np.linalg.inv(cs.frame).T
    assert np.allclose(e.contains(pts, 1e-9), True)
    assert not np.any(e.contains(pts, -1e-9))
    assert np.allclose(np.max(np.abs(pts) / [2.0, 1.0], axis=1), 1.0, atol=1e-9)
