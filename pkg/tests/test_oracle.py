import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mi_ellipse.body import load_body
from mi_ellipse.conic import CenteredEllipse, unit_disk
from mi_ellipse.intersect import intersection_area
from mi_ellipse.oracle import (PolarSum, clip_area, clip_intersection, crossing_step, fd_derivative,
                               grid_search_mi, mc_area, mc_intersection, polygon_area,
                               superlevel_contains)

SQUARE = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])


def test_mc_disk_within_four_sigma():
    est = mc_area(lambda p: np.einsum("ij,ij->i", p, p) <= 1.0, ((-1, 1), (-1, 1)), 200_000, seed=7)
    assert abs(est.value - np.pi) <= 4 * est.sigma
    again = mc_area(lambda p: np.einsum("ij,ij->i", p, p) <= 1.0, ((-1, 1), (-1, 1)), 200_000, 7)
    assert again.value == est.value


def test_mc_sample_floor():
    with pytest.raises(ValueError):
        mc_area(lambda p: p[:, 0] > 0, ((0, 1), (0, 1)), 100)


def test_clip_examples():
    assert clip_area(SQUARE, SQUARE + [1.0, 0.0]).value == pytest.approx(2.0)
    assert clip_area(SQUARE, SQUARE + [3.0, 0.0]).value == 0.0
    diamond = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    assert clip_area(SQUARE, diamond).value == pytest.approx(2.0)
    # orientation must not matter
    assert clip_area(SQUARE[::-1], 0.5 * SQUARE).value == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0.2, 2.0))
def test_clip_axis_aligned_boxes(dx, dy, s):
    other = s * SQUARE + [dx, dy]
    wx = max(0.0, min(1.0, dx + s) - max(-1.0, dx - s))
    wy = max(0.0, min(1.0, dy + s) - max(-1.0, dy - s))
    assert clip_area(SQUARE, other).value == pytest.approx(wx * wy, abs=1e-12)


def test_polygon_area_sign():
    assert polygon_area(SQUARE) == 4.0 and polygon_area(SQUARE[::-1]) == -4.0


@pytest.mark.parametrize("name", ["square", "rect21", "fig1"])
def test_clip_matches_analytic(name):
    b = load_body(name)
    e = CenteredEllipse(0.5, 0.3, 4.0)
    assert clip_intersection(b, e, 8192).value == pytest.approx(intersection_area(b, e), rel=1e-5)


def test_mc_intersection(fig1):
    est = mc_intersection(fig1, unit_disk(), 200_000, seed=1)
    assert abs(est.value - intersection_area(fig1)) <= 4 * est.sigma


def test_fd_rectangle(strip):
    assert fd_derivative(strip, 1, 1e-4).value == pytest.approx(-np.sqrt(3) / 2, abs=1e-7)
    assert fd_derivative(strip, 2, 1e-3, extrapolate=True).value == pytest.approx(
        1 / (2 * np.sqrt(3)), abs=1e-6)
    with pytest.raises(ValueError):
        fd_derivative(strip, 3)
    with pytest.raises(ValueError):
        fd_derivative(strip, 1, h=0.0)


def test_fd_custom_function():
    f = lambda t: np.cos(t)  # noqa: E731
    assert fd_derivative(None, 2, 1e-3, area=f, extrapolate=True).value == pytest.approx(-1.0, abs=1e-9)


def test_crossing_step_bounds():
    assert crossing_step(1.0) == 1e-3
    assert crossing_step(1e-4) == 1e-4
    assert 1e-4 < crossing_step(0.03) < 1e-3


def test_polar_sum_disk():
    f = PolarSum(load_body("disk"))
    assert f(np.eye(2)) == pytest.approx(np.pi, rel=1e-12)
    assert f(np.eye(2) * 4.0) == pytest.approx(np.pi / 4, rel=1e-12)


def test_grid_search_fig1(fig1):
    est = grid_search_mi(fig1, np.pi, t_span=0.6, grid=21)
    assert np.allclose(est.info["argmax"], 0.0, atol=est.info["fine_cell"])
    assert est.info["connected"]
    assert superlevel_contains(est, (0.0, 0.0))
    assert not superlevel_contains(est, (0.6, 0.6))
    with pytest.raises(ValueError):
        grid_search_mi(fig1, np.pi, grid=5)
