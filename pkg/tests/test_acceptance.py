"""Acceptance criteria 1 to 7. Each test prints one PASS/FAIL line, then asserts.

Tolerances are the published acceptance thresholds. Reference constants
come from ``reference_values`` (independent mpmath computations) or are
written out in closed form here.
"""

import math

import numpy as np
import pytest

from fraclab.constructions import (
    K_derivatives, K_lambda_eval, choose_R, delta0_and_rescale, estimate_c3, estimate_c4, make_step_family,
    make_u_lambda, make_v_j, radius_conditions,
)
from fraclab.harness import ExperimentConfig
from fraclab.harness.descriptors import gaussian_field, poisson_field
from fraclab.harness.suites import (
    b2_grid, closed_ball_grid, rescaled_points, verify_oracles, verify_thm11, verify_thm12, verify_thm13,
)
from fraclab.quadrature import ScalarField, fraclap_pv
from fraclab.specfun import FracParams

from conftest import axis
from reference_values import LEAST_RADIUS, NORMALIZATION

DESK = [(1, 0.25), (1, 0.5), (1, 0.75), (2, 0.25), (2, 0.5), (2, 0.75)]
BALL_VOLUME = {1: 2.0, 2: math.pi}


def rel(a, b):
    return abs(a - b) / abs(b)


def announce(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'}: {detail}")


def test_criterion_1_oracles(capsys):
    rng = np.random.default_rng(20261016)
    worst_const = worst_scale = worst_shift = 0.0
    for n, s in DESK:
        P = FracParams.make(n, s)
        one = ScalarField.constant(n, 1.0)
        for x in rng.uniform(-5, 5, size=(20, n)):
            worst_const = max(worst_const, abs(fraclap_pv(one, x, P)[0]))
        g = gaussian_field(n)
        g2 = g.transformed(scale=2.0)
        a = np.array([0.7, -0.3][:n])
        ga = g.translated(a)
        for r in (0.0, 0.5, 1.5):
            x = axis(n, r)
            worst_scale = max(worst_scale, rel(fraclap_pv(g2, x, P)[0], 2.0 ** (2 * s) * fraclap_pv(g, 2 * x, P)[0]))
            worst_shift = max(worst_shift, rel(fraclap_pv(ga, x, P)[0], fraclap_pv(g, x - a, P)[0]))
    P = FracParams.make(1, 0.5)
    poisson = poisson_field()
    worst_poisson = max(rel(fraclap_pv(poisson, [x], P)[0], (1 - x * x) / (1 + x * x) ** 2) for x in (0.0, 0.5, 2.0))
    ok = worst_const <= 1e-9 and worst_poisson <= 1e-6 and worst_scale <= 1e-6 and worst_shift <= 1e-6
    announce(capsys, 1, ok, f"constant {worst_const:.1e} <= 1e-9, Poisson {worst_poisson:.1e}, "
                            f"dilation {worst_scale:.1e}, translation {worst_shift:.1e} <= 1e-6")
    assert ok


def test_criterion_2_two_level_step(capsys):
    worst = 0.0
    for n, s in DESK:
        P = FracParams.make(n, s)
        c, gamma, _ = NORMALIZATION[(n, s)]
        target = -c * gamma * 3.0 ** (-2 * s)
        for j in (1, 10, 100):
            worst = max(worst, rel(fraclap_pv(make_step_family("V", j, P).field, np.zeros(n), P)[0], target))
    P = FracParams.make(1, 0.5)
    line = fraclap_pv(make_step_family("V", 10, P).field, [0.0], P)[0]
    line_err = rel(line, -2 / (3 * math.pi))
    ok = worst <= 1e-6 and line_err <= 1e-6
    announce(capsys, 2, ok, f"max rel err {worst:.1e} <= 1e-6; line value {line!r} vs -2/(3 pi), rel {line_err:.1e}")
    assert ok


def test_criterion_3_mollified_family(capsys):
    details, ok = [], True
    for n, s in DESK:
        P = FracParams.make(n, s)
        sups, worst_scale, used = [], 0.0, 0
        for j in (4, 16, 64):
            fam = make_v_j(j, P)
            errs = []
            for r in (0.0, 0.25, 0.5):
                x = axis(n, r)
                v = fraclap_pv(fam.v, x, P)[0]
                errs.append(abs(v + 1.0))
                if r < fam.R_j:
                    worst_scale = max(worst_scale, rel(v, fam.predicted_operator(x)))
                    used += 1
            sups.append(max(errs))
        good = all(b < a for a, b in zip(sups, sups[1:])) and sups[-1] <= 0.05 and used and worst_scale <= 1e-6
        ok &= bool(good)
        details.append(f"(n={n}, s={s}) sup={sups[-1]:.3g} scale={worst_scale:.1e}")
    announce(capsys, 3, ok, "decreasing sup |op v_j + 1|, <= 0.05 at j=64, scaling <= 1e-6; " + "; ".join(details))
    assert ok


def test_criterion_4_tail_machinery(capsys):
    wanted = ("A + E + F", "sandwich", "nonnegative", "iterated tail limit b equals 1", "b is independent of x")
    ok, details = True, []
    for n, s in DESK:
        rep = verify_thm11(ExperimentConfig(theorem="thm11_b", n=n, sigma=s))
        checks = [c for c in rep.checks if any(w in c.name for w in wanted)]
        b = rep.constants["b"]
        good = len(checks) >= len(wanted) and all(c.passed for c in checks) and abs(b - 1) <= 0.05
        ok &= good
        details.append(f"(n={n}, s={s}) b={b:.12f}")
        if not good:
            details.append("failed: " + ", ".join(c.name for c in checks if not c.passed))
    announce(capsys, 4, ok, "split identity, F >= 0 non-increasing in R, sandwich, b = 1 +- 0.05; " + "; ".join(details))
    assert ok


def blowup_checks(n):
    s, p, q = 0.5, 3, 1
    P = FracParams.make(n, s)
    c, gamma, _ = NORMALIZATION[(n, s)]
    lo, hi = -3 * c * gamma, -c * gamma * 6.0 ** (-2 * s) / 2
    if n == 1:
        assert lo == pytest.approx(-6 / math.pi, rel=1e-15) and hi == pytest.approx(-1 / (6 * math.pi), rel=1e-15)
    hess_bound = -(n + 2 * s) * c * BALL_VOLUME[n] * 4.0 ** (-2 * s - 3)
    lams = (1.0, 10.0, 100.0)
    fams = [make_u_lambda(n, s, p, q, lam) for lam in lams]
    ks = [K_lambda_eval(f, x) for f in fams for x in b2_grid(n)]
    window = lo <= min(ks) and max(ks) <= hi
    grad = max(np.linalg.norm(K_derivatives(f, np.zeros(n)).gradient) / abs(K_lambda_eval(f, np.zeros(n)))
               for f in fams)
    Hs = [K_derivatives(f, np.zeros(n)).hessian for f in fams]
    diag = max(float(np.max(np.diag(H))) for H in Hs)
    off = max(float(np.max(np.abs(H - np.diag(np.diag(H))))) for H in Hs)
    c3, c4 = estimate_c3(fams), estimate_c4(fams)
    resc = [delta0_and_rescale(f, c3=c3, c4=c4) for f in fams]
    resid = max(rel(fraclap_pv(g.u_tilde, x, P)[0], g.K_tilde(x) * float(g.u_tilde(x)) ** p)
                for g in resc for x in rescaled_points(n))
    mins = [float(np.min(g.u_tilde(closed_ball_grid(n)))) for g in resc]
    exact = all(m == g.delta0 ** q * g.lam for m, g in zip(mins, resc))
    growth = mins[-1] / mins[0]
    increasing = all(b > a for a, b in zip(mins, mins[1:]))
    ok = (window and grad <= 1e-6 and diag <= hess_bound and off <= 1e-6 and resid <= 1e-5 and exact
          and increasing and abs(growth - 100.0) <= 1e-12 * 100.0)
    return ok, (f"n={n}: K in [{min(ks):.4f}, {max(ks):.4f}] within [{lo:.4f}, {hi:.4f}], "
                f"|grad K(0)|/|K(0)| {grad:.1e}, max diag H {diag:.4e} <= {hess_bound:.4e}, "
                f"off-diag {off:.1e}, residual {resid:.1e}, min u~ {mins[0]:.6g} -> {mins[-1]:.6g} (x{growth:g})")


def test_criterion_5_blowup_family(capsys):
    results = [blowup_checks(n) for n in (1, 2)]
    ok = all(r[0] for r in results)
    announce(capsys, 5, ok, "; ".join(r[1] for r in results))
    assert ok


def test_criterion_6_least_radius(capsys):
    R = choose_R(1, 0.5, 1, 1, 1)
    cond = radius_conditions(1, 0.5, 1, 1, 1, R)
    at100 = radius_conditions(1, 0.5, 1, 1, 1, 100.0)
    ok = (cond["a_margin"] >= 0 and cond["b_margin"] >= 0 and 100 < R <= 112 and at100["a_margin"] < 0
          and abs(R - LEAST_RADIUS[(1, 0.5, 1, 1, 1)]) <= 1e-8)
    announce(capsys, 6, ok, f"R = {R:.10f} in (100, 112], margins a={cond['a_margin']:.2e} "
                            f"b={cond['b_margin']:.2e}; at R=100 condition (a) misses by {-at100['a_margin']:.6f}")
    assert ok


def test_criterion_7_determinism(capsys):
    runs = [(verify_oracles, ExperimentConfig(n=2, sigma=0.25)),
            (verify_thm12, ExperimentConfig(theorem="thm12", sigma=0.75)),
            (verify_thm11, ExperimentConfig(theorem="thm11_b")),
            (verify_thm13, ExperimentConfig(theorem="thm13"))]
    same = [suite(cfg).to_json(with_runtime=False) == suite(cfg).to_json(with_runtime=False) for suite, cfg in runs]
    ok = all(same)
    announce(capsys, 7, ok, f"identical JSON (runtime excluded) for {sum(same)}/{len(same)} suites run twice")
    assert ok
