"""Acceptance suite: one test per criterion, each at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.  Tolerances here are contractual; do not loosen them.
"""

import functools
import math

import numpy as np
import pytest

from gheat.capacity import (capacity_lower_bound_widened, capacity_sandwich,
                            capacity_time_scaling_check, capacity_upper_bound,
                            order_fit, ramp, sandwich_estimate)
from gheat.critical_points import critical_points, lambda_of_sigma, sigma_of_lambda
from gheat.crosscheck import convergence_order
from gheat.errors import RangeError
from gheat.pde_solver import GridSpec, g_expectation
from gheat.quadrature import moment_integral
from gheat.solutions import (_eval_middle, _eval_outer, build_H, eval_H,
                             heat_check_sigma1, ode_residual)
from gheat.special_functions import phi, phi_bundle, phi_d1, phi_d2

LAM_GRID = [round(0.05 * k, 2) for k in range(1, 10)]       # 0.05 .. 0.45
SIGMA_GRID = [round(0.1 * k, 1) for k in range(1, 10)]      # 0.1 .. 0.9


def criterion(n, name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {n} ({name}): FAIL")
                raise
            print(f"\nACCEPTANCE {n} ({name}): PASS")
        return wrapper
    return deco


@criterion(1, "special functions")
def test_criterion_1_special_functions():
    # ODE residual on 200 random points
    rng = np.random.default_rng(20250808)
    for _ in range(200):
        lam = rng.uniform(0.05, 0.45)
        x = rng.uniform(-6.0, 6.0)
        e = phi_bundle(lam, x)
        assert abs(e.d2 + x * e.d1 + 2.0 * lam * e.phi) <= 1e-9

    # the two second-derivative integrand forms, independently integrated
    for lam in LAM_GRID:
        for x in (-3.0, -1.0, 0.0, 0.5, 1.5, 3.0):
            r1 = moment_integral(lam, x, [-1.0, 0.0, 1.0]).value
            r2 = moment_integral(lam, x, [-2.0 * lam, -x, 0.0]).value
            assert abs(r1 - r2) <= 1e-9

    # closed-form values at the origin
    for lam in (0.1, 0.25, 0.4):
        assert abs(phi(lam, 0.0)
                   - 2.0 ** (-lam - 0.5) * math.gamma(0.5 - lam)) <= 1e-10
        assert abs(phi_d1(lam, 0.0)
                   - 2.0 ** (-lam) * math.gamma(1.0 - lam)) <= 1e-10


@criterion(2, "critical points")
def test_criterion_2_critical_points():
    cps = [critical_points(lam) for lam in LAM_GRID]
    for cp in cps:
        assert -1.0 < cp.x1 < 0.0
        assert cp.x2 > 1.0
        assert cp.x2 > cp.z > -cp.x1
        assert cp.z > 1.0
    for a, b in zip(cps, cps[1:]):
        assert a.x1 > b.x1
        assert a.x2 > b.x2
        assert a.z > b.z
        assert a.sigma_lambda < b.sigma_lambda

    for s in SIGMA_GRID:
        lam_s = lambda_of_sigma(s)
        assert abs(sigma_of_lambda(lam_s) - s) <= 1e-8
        assert lam_s > 0.5 * s * s


@criterion(3, "explicit solutions")
def test_criterion_3_explicit_solutions():
    rng = np.random.default_rng(31)
    pairs = [(0.25, 0.6), (0.25, sigma_of_lambda(0.25)), (0.15, 0.5),
             (0.35, 0.9)]
    for lam, sigma in pairs:
        sol = build_H(lam, sigma)
        for x in rng.uniform(-20.0, 20.0, size=250):
            assert eval_H(sol, x, 0) > 0.0
        for x in rng.uniform(-10.0, 10.0, size=150):
            if min(abs(x - sol.breakpoint), abs(x + sol.breakpoint)) < 1e-6:
                continue
            assert abs(ode_residual(sol, x)) <= 1e-6
        for s in (1.0, -1.0):
            bp = s * sol.breakpoint
            assert abs(_eval_middle(sol, bp, 2)) <= 1e-7
            assert abs(_eval_outer(sol, bp, 2)) <= 1e-7
        # curvature-gluing identity from fresh quadrature evaluations
        c = phi_d2(lam, sol.breakpoint)
        d = phi_d2(lam, -sol.breakpoint)
        scale = max(abs(sol.mu1 * c), abs(sol.mu1 * d), abs(sol.mu2 * c))
        assert abs(sol.mu2 * c + sol.mu1 * d) <= 1e-8 * scale

    for lam, sigma in ((0.25, 0.3), (0.4, 0.5), (0.45, 0.85)):
        with pytest.raises(RangeError):
            build_H(lam, sigma)


@criterion(4, "sigma = 1 closed form")
def test_criterion_4_sigma_one_closed_form():
    for lam in (0.1, 0.25, 0.4):
        for t in (0.5, 1.0, 2.0, 4.0):
            for x in (-3.0, -1.0, 0.0, 2.0, 3.0):
                closed, conv = heat_check_sigma1(lam, (1.0, 1.0), t, x)
                assert abs(closed - conv) <= 1e-6
    # one asymmetric coefficient pair as a spot check
    closed, conv = heat_check_sigma1(0.25, (1.7, 0.4), 2.0, -1.5)
    assert abs(closed - conv) <= 1e-6


@criterion(5, "PDE cross-validation")
def test_criterion_5_pde_cross_validation():
    for sigma in (0.3, 0.5, 0.7):
        r = convergence_order(sigma, t=1.0, dx=0.01, window=4.0)
        coarse = r["coarse"]
        assert coarse["max_error"] <= 5e-3 * coarse["h0"], (sigma, coarse)
        assert r["order"] >= 0.9, (sigma, r["order"])


@criterion(6, "discrete axioms")
def test_criterion_6_discrete_axioms():
    spec = GridSpec(x_min=-4.0, x_max=4.0, dx=0.05, t_end=0.5)
    spec_c = GridSpec(x_min=-4.0, x_max=4.0, dx=0.05, t_end=0.5, boundary=1.5)
    sigma = 0.6
    f = ramp(-0.5, 0.5, 0.25)
    g = ramp(-0.8, 0.2, 0.4)

    base = g_expectation(sigma, f, 0.5, spec)
    shifted = g_expectation(sigma, lambda x: f(x) + 1.5, 0.5, spec_c)
    assert abs(shifted - (base + 1.5)) <= 1e-12

    doubled = g_expectation(sigma, lambda x: 2.0 * f(x), 0.5, spec)
    assert abs(doubled - 2.0 * base) <= 1e-12

    inner = g_expectation(sigma, ramp(-0.4, 0.4, 0.2), 0.5, spec)
    assert inner <= base + 1e-10

    both = g_expectation(sigma, lambda x: f(x) + g(x), 0.5, spec)
    assert both <= base + g_expectation(sigma, g, 0.5, spec) + 1e-10


@criterion(7, "capacity bounds")
def test_criterion_7_capacity_bounds():
    for sigma in (0.3, 0.5, 0.7):
        for eps in (0.05, 0.1, 0.2):
            est = sandwich_estimate(sigma, eps)
            assert est["upper"] <= capacity_upper_bound(sigma, eps) + 5e-3, \
                (sigma, eps, est["upper"])
            hw, bound = capacity_lower_bound_widened(sigma, eps)
            wide = sandwich_estimate(sigma, hw)
            assert wide["lower"] >= bound - 5e-3, (sigma, eps, wide["lower"], bound)

    for eps in (0.05, 0.1, 0.2):
        lo, up = capacity_sandwich(1.0, -eps, eps, 1.0, eps / 8.0)
        want = math.erf(eps / math.sqrt(2.0))
        assert lo - 5e-3 <= want <= up + 5e-3, (eps, lo, up, want)


@criterion(8, "sharp-order fit")
def test_criterion_8_sharp_order_fit():
    for sigma in (0.3, 0.5, 0.7):
        fit = order_fit(sigma, (0.2, 0.1, 0.05, 0.025))
        assert abs(fit.estimated_exponent - fit.target_exponent) <= 0.15, fit
        assert fit.r2 >= 0.99, fit


@criterion(9, "time scaling")
def test_criterion_9_time_scaling():
    for sigma in (0.6, 1.0):
        for t in (2.0, 4.0):
            lhs, rhs = capacity_time_scaling_check(sigma, -1.0, 1.0, t)
            assert abs(lhs - rhs) <= 1e-2, (sigma, t, lhs, rhs)
