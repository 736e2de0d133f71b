import numpy as np
import pytest

from fraclab.quadrature import richardson_gradient, richardson_hessian
from fraclab.quadrature.richardson import richardson_table


def test_table_removes_even_powers():
    h = np.array([0.1, 0.05, 0.025])
    est = 1.0 + 2 * h ** 2 + 3 * h ** 4
    assert richardson_table(list(est)) == pytest.approx(1.0, abs=1e-14)


def test_gradient_and_hessian_of_smooth_function():
    f = lambda z: np.exp(z[0]) * np.sin(z[1])
    x = np.array([0.3, 0.8])
    g = richardson_gradient(f, x)
    H = richardson_hessian(f, x)
    e, s, c = np.exp(0.3), np.sin(0.8), np.cos(0.8)
    assert np.allclose(g, [e * s, e * c], rtol=1e-10)
    assert np.allclose(H, [[e * s, e * c], [e * c, -e * s]], rtol=1e-8)


def test_gradient_of_vector_valued_function_has_leading_axis():
    f = lambda z: np.array([z[0] ** 2, z[0] * z[1]])
    out = richardson_gradient(f, np.array([1.0, 2.0]))
    assert out.shape == (2, 2)
    assert np.allclose(out, [[2.0, 2.0], [0.0, 1.0]])
