import numpy as np
import pytest
from scipy.integrate import quad

from fraclab.errors import ToleranceNotMet
from fraclab.quadrature import QuadConfig, integrate_pieces, jacobi_integrate
from fraclab.quadrature.rules import gauss_jacobi01, gauss_legendre


def test_gauss_legendre_is_exact_for_polynomials():
    x, w = gauss_legendre(8)
    for k in range(16):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.dot(w, x ** k) == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, -0.9])
def test_jacobi_rule_matches_scipy(alpha):
    s, w = gauss_jacobi01(20, alpha)
    ref = quad(lambda t: np.cos(3 * t), 0, 1, weight="alg", wvar=(alpha, 0))[0]
    assert np.dot(w, np.cos(3 * s)) == pytest.approx(ref, rel=1e-12)


def test_jacobi_exponent_must_exceed_minus_one():
    with pytest.raises(ValueError):
        gauss_jacobi01(8, -1.0)


def test_jacobi_integrate_weakly_singular_integral():
    v, err = jacobi_integrate(np.exp, 2.0, -0.3)
    ref = quad(lambda t: np.exp(t), 0, 2, weight="alg", wvar=(-0.3, 0))[0]
    assert v == pytest.approx(ref, rel=1e-12)
    assert err < 1e-9


def test_jacobi_integrate_strict_and_lenient():
    cfg = QuadConfig(jacobi_start=2, jacobi_max=4, rel_tol=1e-15, abs_tol=1e-300)

    def rough(t):
        return np.abs(np.sin(40 * t))

    with pytest.raises(ToleranceNotMet):
        jacobi_integrate(rough, 1.0, 0.0, cfg)
    v, err = jacobi_integrate(rough, 1.0, 0.0, cfg, strict=False)
    assert np.isfinite(v) and err > 0


def test_integrate_pieces_with_kinks_and_vector_values():
    f = lambda t: np.stack([np.abs(t - 0.3), np.exp(-t)], axis=-1)
    v, err, _ = integrate_pieces(f, [(0.0, 0.3), (0.3, 2.0)])
    assert v[0] == pytest.approx(0.3 ** 2 / 2 + 1.7 ** 2 / 2, rel=1e-12)
    assert v[1] == pytest.approx(1 - np.exp(-2.0), rel=1e-12)


def test_integrate_pieces_reports_exhausted_budget():
    cfg = QuadConfig(max_subdiv=2, rel_tol=1e-14, abs_tol=1e-300)
    with pytest.raises(ToleranceNotMet):
        integrate_pieces(lambda t: np.sin(1.0 / (t + 1e-3)), [(0.0, 1.0)], cfg)


def test_quad_config_validation():
    with pytest.raises(ValueError):
        QuadConfig(far_policy="nope")
    with pytest.raises(ValueError):
        QuadConfig(rel_tol=0.0)
    assert QuadConfig().with_overrides(rel_tol=1e-6, abs_tol=None).rel_tol == 1e-6
