"""Kernel integrals over exteriors and their derivatives."""

import numpy as np
import pytest
from scipy.integrate import quad

from fraclab.errors import PointOutsideBall, SingularKernel
from fraclab.quadrature import (
    ScalarField, TailDescriptor, kernel_derivative_integral, kernel_integral, richardson_gradient,
    richardson_hessian, tail_integral,
)
from fraclab.specfun import FracParams, ball_complement_integral

from conftest import axis
from reference_values import EXTERIOR_MASS_LINE


def shell(n, a=3.0, b=5.0):
    def prof(r):
        r = np.asarray(r, dtype=float)
        return np.where((r > a) & (r < b), np.sin(r) ** 2 + 1.0, 0.0)
    return ScalarField.from_profile(n, prof, TailDescriptor.compact(b), (a, b), support_inner=a)


@pytest.mark.parametrize("s", [0.25, 0.5])
def test_exterior_mass_on_the_line(s):
    P = FracParams.make(1, s)
    one = ScalarField.constant(1, 1.0)
    assert tail_integral(one, [0.5], 3.0, P)[0] == pytest.approx(EXTERIOR_MASS_LINE[s], rel=1e-12)


def test_tail_at_origin_is_the_ball_complement(params):
    one = ScalarField.constant(params.n, 1.0)
    v, _ = tail_integral(one, np.zeros(params.n), 4.0, params)
    assert v == pytest.approx(params.c * ball_complement_integral(params.n, params.sigma, 4.0), rel=1e-12)


def test_power_law_tail_mass(params):
    f = ScalarField.from_profile(params.n, lambda r: np.asarray(r, dtype=float) ** -1.0,
                                 TailDescriptor.power_law(1.0, 1.0, 0.0))
    v, _ = tail_integral(f, np.zeros(params.n), 2.0, params)
    assert v == pytest.approx(params.c * ball_complement_integral(params.n, params.sigma, 2.0, 1.0), rel=1e-12)


def test_kernel_integral_on_the_line_against_scipy():
    P = FracParams.make(1, 0.5)
    f = shell(1)
    x = 1.2
    g = lambda y: float(f(np.array([y]))) * abs(x - y) ** -2.0
    ref = quad(g, 3, 5)[0] + quad(g, -5, -3)[0]
    assert kernel_integral(f, [x], P)[0] == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_aligned_and_full_methods_agree(n):
    P = FracParams.make(n, 0.5)
    f = shell(n)
    x = np.array([0.9, -0.5, 0.3][:n])
    for order in (0, 1, 2):
        a = kernel_integral(f, x, P, order=order, method="aligned")[0]
        b = kernel_integral(f, x, P, order=order, method="full")[0]
        assert np.allclose(a, b, rtol=1e-9, atol=1e-14)


def test_derivatives_match_richardson(params):
    n = params.n
    f = shell(n)
    x = axis(n, 0.7)
    if n > 1:
        x[1] = -0.4
    val = lambda z: kernel_integral(f, z, params)[0]
    G, _ = kernel_derivative_integral(f, x, 1, params)
    H, _ = kernel_derivative_integral(f, x, 2, params)
    assert np.allclose(G, richardson_gradient(val, x, 0.05, 4), rtol=1e-8, atol=1e-12)
    assert np.allclose(H, richardson_hessian(val, x, 0.05, 4), rtol=1e-7, atol=1e-10)


def test_gradient_vanishes_at_the_centre(params):
    G, _ = kernel_derivative_integral(shell(params.n), np.zeros(params.n), 1, params)
    assert np.max(np.abs(G)) < 1e-15


def test_point_must_be_inside_the_hole():
    P = FracParams.make(1, 0.5)
    with pytest.raises(SingularKernel):
        kernel_integral(shell(1), [3.5], P)
    with pytest.raises(PointOutsideBall):
        tail_integral(ScalarField.constant(1, 1.0), [4.0], 4.0, P)
