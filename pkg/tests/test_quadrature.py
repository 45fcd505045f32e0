import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgraph.quadrature import adaptive_gauss_legendre, gauss_legendre


def test_polynomials_are_exact():
    f = lambda x: 5 * x ** 9 - x ** 4 + 2
    exact = 0.5 * (2 ** 10 - 1) - (2 ** 5 - 1) / 5 + 2
    assert gauss_legendre(f, 1.0, 2.0, degree=5) == pytest.approx(exact, rel=1e-14)


@given(st.floats(0.5, 80.0), st.floats(-3.0, 3.0), st.floats(0.1, 5.0))
@settings(max_examples=50, deadline=None)
def test_oscillatory_integrals(w, a, width):
    b = a + width
    exact = (math.sin(w * b) - math.sin(w * a)) / w
    got = adaptive_gauss_legendre(lambda x: np.cos(w * x), a, b, tol=1e-12)
    assert got == pytest.approx(exact, abs=1e-11)


def test_reversed_and_empty_intervals():
    assert adaptive_gauss_legendre(np.exp, 1.0, 1.0) == 0.0
    assert adaptive_gauss_legendre(np.exp, 1.0, 0.0) == pytest.approx(1 - math.e, abs=1e-12)


def test_refinement_concentrates_on_kink():
    got = adaptive_gauss_legendre(np.abs, -1.0, 2.0, tol=1e-10)
    assert got == pytest.approx(2.5, abs=1e-10)


def test_gives_up_eventually():
    with pytest.raises(RuntimeError):
        adaptive_gauss_legendre(lambda x: np.sign(np.sin(1e4 * x)), 0, 1, tol=1e-15,
                                max_panels=64)
