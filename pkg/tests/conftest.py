import numpy as np
import pytest

from mi_ellipse.body import load_body


@pytest.fixture(scope="session")
def fig1():
    return load_body("fig1")


@pytest.fixture(scope="session")
def square():
    return load_body("square")


@pytest.fixture(scope="session")
def rect21():
    return load_body("rect21")


@pytest.fixture(scope="session")
def strip():
    return load_body("rect_strip")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report(capsys):
    """Print one verdict line straight to the terminal."""
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
    return emit
