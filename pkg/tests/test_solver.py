import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mi_ellipse.body import apply_unimodular, linear_image, random_unimodular
from mi_ellipse.conic import CenteredEllipse, form_distance, unit_disk
from mi_ellipse.errors import LambdaOutOfRange
from mi_ellipse.intersect import find_crossings, intersection_area
from mi_ellipse.samplers import random_polygon
from mi_ellipse.solver import (_moved, chart_gradient, displaced_center_check, family_hausdorff,
                               mi_ellipse, mi_family, quasiconcavity_probe, sandwich_range)
from mi_ellipse.variation import residual_D


@pytest.fixture(scope="module")
def rect_extremal(rect21):
    return sandwich_range(rect21)


def test_fig1_disk_is_optimal(fig1):
    r = mi_ellipse(fig1, np.pi)
    assert form_distance(r.ellipse, unit_disk()) <= 1e-6
    assert r.residual <= 1e-7
    assert r.concavity[0] < 0 and r.concavity[1] < 0


def test_square_quarter_turn_symmetry(square):
    # the quarter-turn symmetry and uniqueness force a disk
    r = mi_ellipse(square, 4.5)
    assert r.ellipse.t <= 1e-6
    assert r.intersection <= min(4.5, square.area)


def test_rectangle_axes_aligned(rect21, rect_extremal):
    r = mi_ellipse(rect21, 8.0, extremal=rect_extremal)
    # the reflection symmetries keep the axes on the coordinate axes
    assert min(r.ellipse.phi, np.pi - r.ellipse.phi, abs(r.ellipse.phi - np.pi / 2)) <= 1e-6
    assert r.residual <= 1e-7


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.1, 0.8))
def test_unimodular_equivariance(seed, magnitude):
    rng = np.random.default_rng(seed)
    b = random_polygon(rng)
    L = random_unimodular(rng, magnitude)
    john, loewner = sandwich_range(b)
    lam = 0.5 * (john.ellipse.area + loewner.ellipse.area)
    r = mi_ellipse(b, lam, extremal=(john, loewner))
    moved = mi_ellipse(apply_unimodular(b, L), lam)
    Li = np.linalg.inv(L)
    want = CenteredEllipse.from_form(Li.T @ r.ellipse.form @ Li)
    assert form_distance(moved.ellipse, want) <= 1e-4


def test_out_of_range(rect21, rect_extremal):
    with pytest.raises(LambdaOutOfRange):
        mi_ellipse(rect21, 1.0, extremal=rect_extremal)
    with pytest.raises(LambdaOutOfRange):
        mi_ellipse(rect21, 20.0, extremal=rect_extremal)


def test_endpoint_consistency(rect21, rect_extremal):
    john, loewner = rect_extremal
    at = mi_ellipse(rect21, john.ellipse.area, extremal=rect_extremal)
    assert at.ellipse == john.ellipse and at.residual == 0.0
    near = mi_ellipse(rect21, john.ellipse.area * (1 + 1e-6), extremal=rect_extremal)
    assert form_distance(near.ellipse.with_area(john.ellipse.area), john.ellipse) <= 1e-3


def test_family(rect21, rect_extremal):
    john, loewner = rect_extremal
    fam = mi_family(rect21, 5, extremal=rect_extremal)
    lams = [lam for lam, _ in fam]
    assert np.allclose(lams, np.linspace(john.ellipse.area, loewner.ellipse.area, 5))
    assert fam[0][1].ellipse == john.ellipse and fam[-1][1].ellipse == loewner.ellipse
    areas = [r.intersection for _, r in fam]
    assert np.all(np.diff(areas) > 0)


def test_family_hausdorff_shrinks_with_resolution(rect21, rect_extremal):
    coarse = family_hausdorff(mi_family(rect21, 3, extremal=rect_extremal))
    fine = family_hausdorff(mi_family(rect21, 7, extremal=rect_extremal))
    assert fine.max() < coarse.max()
    assert coarse.max() < 1.0


def test_chart_gradient_matches_fd(rect21):
    e = CenteredEllipse(0.3, 0.4, 7.0)
    cs = find_crossings(rect21, e)
    g = chart_gradient(residual_D(cs))
    M = cs.frame * np.sqrt(np.sqrt(np.linalg.det(e.form)))
    h = 1e-5
    fd = []
    for k in range(2):
        d = np.zeros(2)
        d[k] = h
        up = intersection_area(rect21, _moved(M, d, e.area))
        down = intersection_area(rect21, _moved(M, -d, e.area))
        fd.append((up - down) / (2 * h))
    scale = e.area / np.pi
    assert np.allclose(np.array(fd) / scale, g, atol=1e-6)


def test_result_json(fig1):
    r = mi_ellipse(fig1, np.pi)
    out = json.loads(json.dumps(r.to_json()))
    assert out["lambda"] == np.pi and out["ellipse"]["area"] == pytest.approx(np.pi)
    assert set(out) >= {"ellipse", "intersection", "residual", "concavity", "iterations"}


def test_displaced_center_requires_interior(square):
    with pytest.raises(LambdaOutOfRange):
        displaced_center_check(square, np.pi)


def test_displaced_center_small_grid(rect21, rect_extremal):
    rep = displaced_center_check(rect21, 8.0, grid=5)
    assert rep["argmax"] == [0.0, 0.0] and rep["ok"] and rep["excess"] <= 1e-12


def test_quasiconcavity_probe_fig1(fig1):
    rep = quasiconcavity_probe(fig1, steps=21)
    assert rep["violations"] == [] and rep["unimodal"]
    assert rep["argmax"] == pytest.approx(0.0)


def test_quasiconcavity_probe_scaled_lambda(rect21):
    rep = quasiconcavity_probe(rect21, np.eye(2), (-1.5, 1.5), 21, lam=8.0)
    assert rep["violations"] == []
    with pytest.raises(ValueError):
        quasiconcavity_probe(rect21, steps=2)


def test_frame_argument(fig1, rng):
    L = random_unimodular(rng, 0.4)
    a = quasiconcavity_probe(fig1, L, (-1, 1), 5)
    b = quasiconcavity_probe(linear_image(fig1, L), None, (-1, 1), 5)
    assert np.allclose(a["I"], b["I"], rtol=1e-12)
