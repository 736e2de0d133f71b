import numpy as np
import pytest

from fraclab.errors import DivergentTail, NonSmoothPoint, NotRadial
from fraclab.quadrature import ScalarField, SmoothWindow, TailDescriptor, fraclap_pv, radial_fraclap
from fraclab.specfun import FracParams


def bump(n=1):
    return ScalarField.from_profile(n, lambda r: np.exp(-np.asarray(r) ** 2), TailDescriptor.bounded(1.0, 0.0),
                                    nonneg=True, name="g")


def test_transformed_field_values():
    g = bump(2)
    h = g.transformed(amplitude=3.0, scale=2.0, shift=[1.0, 0.0])
    x = np.array([1.5, 0.5])
    assert float(h(x)) == pytest.approx(3.0 * float(g(2.0 * (x - [1.0, 0.0]))))
    assert h.center == (1.0, 0.0)
    assert h.radius_of(x) == pytest.approx(np.sqrt(0.5))


def test_power_law_tail_transforms_with_the_field():
    t = TailDescriptor.power_law(2.0, 1.5, 4.0)
    u = t.transformed(3.0, 2.0)
    rho = np.array([5.0, 9.0])
    assert np.allclose(u.value(rho), 3.0 * t.value(2.0 * rho))
    assert u.onset == 2.0


def test_power_sum_drops_zero_terms():
    assert TailDescriptor.power_sum([(0.0, 1.0)], 3.0).kind == "compact"


def test_divergent_tail_is_refused():
    P = FracParams.make(1, 0.5)
    f = ScalarField.from_profile(1, lambda r: np.asarray(r, dtype=float) ** 1.5,
                                 TailDescriptor.power_law(1.0, -1.5, 1.0))
    with pytest.raises(DivergentTail):
        fraclap_pv(f, [0.5], P)


def test_point_outside_smooth_window():
    P = FracParams.make(1, 0.5)
    f = ScalarField.from_profile(1, lambda r: np.where(np.asarray(r) < 1, 1.0, 0.0), TailDescriptor.compact(1.0),
                                 (1.0,), window=SmoothWindow(1.0))
    with pytest.raises(NonSmoothPoint):
        fraclap_pv(f, [1.0], P)
    with pytest.raises(NonSmoothPoint):
        fraclap_pv(f, [2.0], P)


def test_window_margin_for_annulus():
    w = SmoothWindow(5.0, 2.0)
    assert w.margin(3.0) == 1.0
    assert w.margin(1.0) < 0


def test_radial_path_needs_a_profile():
    P = FracParams.make(2, 0.5)
    with pytest.raises(NotRadial):
        radial_fraclap(bump(2).generic(), 0.5, P)


def test_points_must_match_dimension():
    with pytest.raises(ValueError):
        bump(2)(np.zeros(3))
