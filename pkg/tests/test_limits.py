"""Tail masses, the near/far split and the iterated tail limit."""

import csv
import io
import json
import math

import numpy as np
import pytest

from fraclab.constructions import beta, make_v_j
from fraclab.errors import NonConvergent, PointOutsideBall, RadiusTooSmall
from fraclab.limits import (
    FunctionSequence, aef_decompose, constant_solution_check, estimate_b, extrapolate, sandwich_check,
    tail_profile,
)
from fraclab.quadrature import ScalarField, fraclap_pv, tail_integral
from fraclab.specfun import FracParams

from conftest import axis
from reference_values import TAIL_MASS_LINE

LINE = FracParams.make(1, 0.5)


def mollified(P):
    return FunctionSequence(lambda j: make_v_j(j, P).v, ScalarField.constant(P.n, 1.0), "mollified")


def index_grid(P, R, levels=4):
    j0 = 2.0 ** math.ceil(math.log2((beta(P) * R) ** (2 * P.sigma)))
    return [j0 * 2.0 ** k for k in range(levels)]


# -- extrapolation -------------------------------------------------------------
def test_extrapolation_is_exact_on_polynomials_in_h():
    h = [1 / 4, 1 / 8, 1 / 16, 1 / 32]
    vals = [2.0 + 3 * t - 5 * t ** 2 + 0.5 * t ** 3 for t in h]
    best, gap = extrapolate(vals, h, (1, 2, 3))
    assert best == pytest.approx(2.0, abs=1e-12)


def test_extrapolation_with_fractional_exponents():
    h = [0.1, 0.05, 0.025]
    vals = [1.0 + t ** 0.5 + t ** 2.5 for t in h]
    assert extrapolate(vals, h, (0.5, 2.5))[0] == pytest.approx(1.0, abs=1e-12)


def test_extrapolation_argument_checks():
    with pytest.raises(ValueError):
        extrapolate([1.0, 2.0], [1.0], (1,))
    assert extrapolate([3.0], [1.0], (1,)) == (3.0, 0.0)


# -- near/far split ----------------------------------------------------------------
@pytest.mark.parametrize("j,x,R", [(4, 0.0, 10.0), (16, 0.5, 10.0), (64, 0.25, 20.0)])
def test_split_reassembles_the_difference(params, j, x, R):
    d = aef_decompose(mollified(params), j, axis(params.n, x), R, params)
    assert d.ok
    assert abs(d.A + d.E + d.F - d.direct) <= d.tolerance
    assert d.F >= 0.0


def test_split_of_identical_fields_vanishes():
    u = ScalarField.constant(1, 1.0)
    d = aef_decompose(FunctionSequence.constant(u), 1, [0.3], 10.0, LINE)
    assert d.direct == 0.0 and abs(d.A) <= 1e-12 and d.E == -d.F and d.F > 0


def test_split_needs_a_large_radius():
    with pytest.raises(RadiusTooSmall):
        aef_decompose(mollified(LINE), 4, [1.0], 3.9, LINE)


def test_near_part_vanishes_once_the_plateau_covers_the_ball():
    P = LINE
    R = 10.0
    j = index_grid(P, R)[1]
    d = aef_decompose(mollified(P), j, [0.25], R, P)
    assert abs(d.A) <= 1e-8


# -- tail masses ------------------------------------------------------------------------
@pytest.mark.parametrize("key", sorted(TAIL_MASS_LINE))
def test_tail_mass_on_the_line(key):
    j, R = key
    F, _ = tail_integral(make_v_j(j, LINE).v, [0.0], R, LINE)
    assert F == pytest.approx(TAIL_MASS_LINE[key], rel=1e-10, abs=1e-13)


def test_tail_profile_is_nonincreasing(params):
    f = make_v_j(256, params).v
    vals, ok = tail_profile(f, np.zeros(params.n), [5, 10, 20, 40], params)
    assert ok and np.all(vals >= 0)


def test_sandwich_is_an_equality_at_the_origin():
    res = sandwich_check(mollified(LINE), 1024, [0.0], 10.0, LINE)
    assert res.passed and res.lower_margin == 0.0 and res.upper_margin == 0.0


@pytest.mark.parametrize("x", [0.5, 3.0, 9.0])
def test_sandwich_off_the_origin(params, x):
    assert sandwich_check(mollified(params), 1024, axis(params.n, x), 10.0, params)


def test_sandwich_rejects_points_outside_the_ball():
    with pytest.raises(PointOutsideBall):
        sandwich_check(mollified(LINE), 4, [10.0], 10.0, LINE)


# -- iterated limit ---------------------------------------------------------------------
def test_iterated_limit_with_extrapolation(params):
    radii = [10.0, 20.0, 40.0, 80.0]
    est = estimate_b(mollified(params), index_grid(params, radii[-1]), radii, [axis(params.n, 0.5)], params,
                     index_method="richardson", radius_method="richardson")
    assert est.b == pytest.approx(1.0, abs=1e-6)
    assert est.relative_spread <= 1e-6
    assert est.nonnegative and est.monotone_in_R


def test_iterated_limit_plain_last_value():
    radii = [10.0, 20.0, 40.0, 80.0]
    est = estimate_b(mollified(LINE), index_grid(LINE, radii[-1]), radii, [], LINE)
    assert 1.0 < est.b < 1.05
    assert est.x_samples == [(0.0,)]


def test_iterated_limit_detects_an_unconverged_index_grid():
    with pytest.raises(NonConvergent):
        estimate_b(mollified(LINE), [64, 128, 256], [10.0, 20.0], [], LINE, gate_tol=1e-3)


def test_iterated_limit_argument_checks():
    seq = mollified(LINE)
    with pytest.raises(ValueError):
        estimate_b(seq, [8, 4], [10.0], [], LINE)
    with pytest.raises(ValueError):
        estimate_b(seq, [4, 8], [10.0], [[6.0]], LINE)
    with pytest.raises(ValueError):
        estimate_b(seq, [4, 8], [10.0, 20.0], [], LINE, index_method="spline")


def test_fixed_compact_sequence_has_zero_tail():
    u = make_v_j(4, LINE).v
    est = estimate_b(FunctionSequence.constant(u), [1, 2, 3], [10.0, 20.0], [[1.0]], LINE)
    assert est.b == 0.0 and est.spread == 0.0


def test_estimate_serialisation():
    radii = [10.0, 20.0]
    est = estimate_b(mollified(LINE), index_grid(LINE, 20.0, 3), radii, [[0.5]], LINE,
                     index_method="richardson")
    d = json.loads(est.to_json())
    assert d["b"] == est.b and len(d["table"]) == 2
    rows = list(csv.reader(io.StringIO(est.to_csv())))
    assert rows[0][0] == "R" and len(rows) == 3 and len(rows[1]) == 4
    assert float(rows[2][-1]) == est.table[0, 1, -1]


def test_sequence_rejects_signed_members():
    f = ScalarField.constant(1, -1.0)
    seq = FunctionSequence(lambda i: f, ScalarField.constant(1, 1.0))
    with pytest.raises(ValueError):
        seq.member(1)


# -- constant solutions ------------------------------------------------------------------
@pytest.mark.parametrize("b,p", [(1.0, 3.0), (16.0, 2.0), (0.5, -1.0)])
def test_constant_solution(b, p):
    res = constant_solution_check(b, p, LINE)
    assert res.passed and res.constant == pytest.approx(b ** (1 / p))


def test_constant_solution_arguments():
    with pytest.raises(ValueError):
        constant_solution_check(1.0, 0, LINE)
    with pytest.raises(ValueError):
        constant_solution_check(0.0, 2, LINE)


def test_iterated_limit_is_stable_under_doubling_the_largest_radius(params):
    radii = [10.0, 20.0, 40.0, 80.0]
    kw = dict(index_method="richardson", radius_method="richardson")
    a = estimate_b(mollified(params), index_grid(params, 80.0), radii, [], params, **kw)
    b = estimate_b(mollified(params), index_grid(params, 160.0), radii + [160.0], [], params, **kw)
    assert abs(a.b - b.b) <= 1e-6
