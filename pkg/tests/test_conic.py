import numpy as np
import pytest
from hypothesis import given, strategies as st

from mi_ellipse.conic import (CenteredEllipse, ellipse_radial, form_distance, normalize_to_disk,
                              standard_ellipse, unit_disk)

ellipses = st.builds(CenteredEllipse, st.floats(-3, 3), st.floats(-10, 10), st.floats(0.1, 20))


@given(ellipses)
def test_form_round_trip(e):
    back = CenteredEllipse.from_form(e.form)
    assert np.allclose(back.form, e.form, rtol=1e-10, atol=1e-12)
    assert back.area == pytest.approx(e.area, rel=1e-12)


@given(ellipses)
def test_chart_round_trip(e):
    back = CenteredEllipse.from_chart(*e.chart, area=e.area)
    assert np.allclose(back.form, e.form, rtol=1e-10, atol=1e-12)


@given(ellipses)
def test_canonical_parameters(e):
    assert e.t >= 0 and 0 <= e.phi < np.pi
    assert np.linalg.det(e.form) == pytest.approx((np.pi / e.area) ** 2, rel=1e-10)


@given(ellipses)
def test_normalize_to_disk(e):
    L, s = normalize_to_disk(e)
    assert np.linalg.det(L) == pytest.approx(1.0, rel=1e-10)
    pts = e.boundary(16) @ (s * L).T
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-10)


@given(ellipses, st.floats(0, 2 * np.pi))
def test_radial_on_boundary(e, theta):
    r = np.sqrt(ellipse_radial(e, theta))
    p = r * np.array([np.cos(theta), np.sin(theta)])
    assert p @ e.form @ p == pytest.approx(1.0, rel=1e-10)


def test_standard_family():
    e = standard_ellipse(0.7)
    assert np.allclose(e.form, np.diag([np.exp(0.7), np.exp(-0.7)]))
    assert form_distance(unit_disk(), e) == pytest.approx(0.7, rel=1e-12)
    assert standard_ellipse(-0.7).phi == pytest.approx(np.pi / 2)


def test_json_and_validation():
    e = CenteredEllipse(0.4, 1.0, 3.0)
    assert CenteredEllipse.from_json(e.to_json()) == e
    assert np.allclose(CenteredEllipse.from_json({"form": e.form.tolist()}).form, e.form)
    with pytest.raises(ValueError):
        CenteredEllipse(0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        CenteredEllipse.from_form([[1.0, 0.0], [0.0, -1.0]])
