import numpy as np
import pytest
from hypothesis import given, strategies as st

from mi_ellipse._workers import parallel_map
from mi_ellipse.quadrature import integrate


@given(st.floats(-3, 3), st.floats(0.01, 4))
def test_polynomial_exact(a, w):
    f = lambda x: 3 * x ** 2 - x + 2  # noqa: E731
    want = (a + w) ** 3 - a ** 3 - 0.5 * ((a + w) ** 2 - a ** 2) + 2 * w
    assert integrate(f, [a, a + w]) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_kink_as_breakpoint():
    f = lambda x: np.minimum(np.abs(x - 0.3), 0.2)  # noqa: E731
    want = 0.2 * 0.6 + 0.02 + 0.02 + 0.2 * 0.1
    assert integrate(f, [-0.5, 0.1, 0.3, 0.5, 0.6]) == pytest.approx(want, abs=1e-14)


def test_unresolved_kink_still_converges():
    f = lambda x: np.abs(x - 1 / 3)  # noqa: E731
    assert integrate(f, [0.0, 1.0]) == pytest.approx(5 / 18, abs=1e-12)


def test_empty_interval():
    assert integrate(np.sin, [1.0, 1.0]) == 0.0


def test_parallel_map_order():
    assert parallel_map(lambda x: x * x, list(range(50))) == [x * x for x in range(50)]
