import math

import pytest
from hypothesis import given, strategies as st

from fraclab.specfun import (
    FracParams, ball_complement_integral, normalization_constant, sphere_measures, tail_constant,
    weighted_tail_constant,
)

from reference_values import NORMALIZATION


@pytest.mark.parametrize("key", sorted(NORMALIZATION))
def test_constants_match_high_precision_values(key):
    n, s = key
    c, g, gq = NORMALIZATION[key]
    assert normalization_constant(n, s) == pytest.approx(c, rel=1e-14)
    assert tail_constant(n, s) == pytest.approx(g, rel=1e-14)
    assert weighted_tail_constant(n, s, 1.0) == pytest.approx(gq, rel=1e-14)


def test_half_laplacian_constants_in_low_dimensions():
    assert normalization_constant(1, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert normalization_constant(3, 0.5) == pytest.approx(1.0 / math.pi ** 2, rel=1e-15)


def test_sphere_and_ball_measures():
    assert sphere_measures(1) == (2.0, 2.0)
    assert sphere_measures(2) == pytest.approx((2 * math.pi, math.pi))
    assert sphere_measures(3) == pytest.approx((4 * math.pi, 4 * math.pi / 3))


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
def test_sigma_outside_unit_interval_is_rejected(bad):
    with pytest.raises(ValueError):
        FracParams.make(1, bad)


def test_dimension_must_be_positive():
    with pytest.raises(ValueError):
        FracParams.make(0, 0.5)


def test_weighted_tail_needs_q_above_minus_two_sigma():
    with pytest.raises(ValueError):
        weighted_tail_constant(1, 0.5, -1.0)


@given(n=st.integers(1, 5), s=st.floats(0.05, 0.95), r=st.floats(0.1, 50.0), q=st.floats(0.0, 3.0))
def test_ball_complement_scales_like_a_power(n, s, r, q):
    base = ball_complement_integral(n, s, 1.0, q)
    assert ball_complement_integral(n, s, r, q) == pytest.approx(base * r ** (-2 * s - q), rel=1e-12)


@given(n=st.integers(1, 6), s=st.floats(0.01, 0.99))
def test_normalization_is_positive_and_params_consistent(n, s):
    P = FracParams.make(n, s)
    assert P.c > 0
    assert P.kernel_power == n + 2 * s
    assert P.gamma_tail == pytest.approx(P.sphere_area / (2 * s))
    assert P.to_dict()["c"] == P.c
