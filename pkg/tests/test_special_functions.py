import math

import numpy as np
import pytest

from gheat.errors import InvalidParameter
from gheat.special_functions import (LambdaParam, PhiEval, PsiCoefficients,
                                     phi, phi_bundle, phi_d1, phi_d2, phi_d3,
                                     psi)
from gheat.critical_points import critical_points

SQRT_2PI = math.sqrt(2.0 * math.pi)


def test_phi_gamma_identity(ref):
    got = phi(0.25, 0.0)
    assert abs(got - ref["phi_identities"]["phi0"]) < 1e-10
    assert abs(got - 2.0 ** (-0.75) * math.gamma(0.25)) < 1e-10


def test_phi_d1_gamma_identity(ref):
    got = phi_d1(0.25, 0.0)
    assert abs(got - ref["phi_identities"]["d1_0"]) < 1e-10
    assert abs(got - 2.0 ** (-0.25) * math.gamma(0.75)) < 1e-10


@pytest.mark.parametrize("lam", (0.1, 0.25, 0.4))
def test_phi_d1_positive_at_origin(lam):
    assert phi_d1(lam, 0.0) > 0.0


def test_ode_residual_on_random_sample():
    rng = np.random.default_rng(20250808)
    for _ in range(200):
        lam = rng.uniform(0.05, 0.45)
        x = rng.uniform(-6.0, 6.0)
        e = phi_bundle(lam, x)
        assert abs(e.ode_residual(lam, x)) <= 1e-9
        assert abs(e.ode_residual(lam, x)) <= 100.0 * max(e.err, 1e-16)


def test_phi_d2_at_origin_forced_by_ode():
    # y'' + x y' + 2 lam y = 0 at x = 0
    for lam in (0.1, 0.25, 0.4):
        assert abs(phi_d2(lam, 0.0) + 2.0 * lam * phi(lam, 0.0)) < 1e-10
    assert phi_d2(0.25, 0.0) == pytest.approx(-1.0779, abs=1e-4)


def test_phi_d2_signs_near_unit_points():
    assert phi_d2(0.25, -1.0) > 0.0
    assert phi_d2(0.25, 1.0) < 0.0


@pytest.mark.parametrize("lam", [round(0.05 * k, 2) for k in range(1, 10)])
def test_phi_d2_sum_at_unit_points_negative(lam):
    assert phi_d2(lam, 1.0) + phi_d2(lam, -1.0) < 0.0


def test_phi_d2_sign_structure_around_roots():
    cp = critical_points(0.25)
    for x in (-0.9, cp.x1 - 0.05, cp.x2 + 0.3, 3.0):
        if x < cp.x1 or x > cp.x2:
            assert phi_d2(0.25, x) > 0.0
    for x in (cp.x1 + 0.05, 0.0, 1.0, cp.x2 - 0.05):
        assert phi_d2(0.25, x) < 0.0


def test_finite_difference_consistency():
    h = 1e-5
    cases = [(0.2, 1.0), (0.25, 0.5), (0.35, -1.5)]
    for lam, x in cases:
        fd1 = (phi(lam, x + h) - phi(lam, x - h)) / (2.0 * h)
        assert abs(fd1 - phi_d1(lam, x)) < 1e-8
        fd2 = (phi_d1(lam, x + h) - phi_d1(lam, x - h)) / (2.0 * h)
        assert abs(fd2 - phi_d2(lam, x)) < 1e-6
        fd3 = (phi_d2(lam, x + h) - phi_d2(lam, x - h)) / (2.0 * h)
        assert abs(fd3 - phi_d3(lam, x)) < 1e-6


def test_phi_d3_routes_agree():
    lam, x = 0.3, 1.0
    e = phi_bundle(lam, x)
    r1 = (-2.0 * lam - 1.0) * e.d1 - x * e.d2
    r2 = (x * x - 2.0 * lam - 1.0) * e.d1 + 2.0 * lam * x * e.phi
    assert abs(r1 - r2) < 1e-9
    assert phi_d3(lam, x) == pytest.approx(r1, abs=1e-12)


def test_phi_d3_at_origin():
    lam = 0.2
    want = (-2.0 * lam - 1.0) * phi_d1(lam, 0.0)
    got = phi_d3(lam, 0.0)
    assert got < 0.0
    assert abs(got - want) < 1e-10


def test_decay_toward_plus_infinity_is_algebraic():
    # phi(x) ~ sqrt(2 pi) x^(-2 lam) (1 + lam(2 lam + 1)/x^2 + ...)
    for lam in (0.1, 0.3):
        ratio = phi(lam, 50.0) * 50.0 ** (2.0 * lam) / SQRT_2PI
        assert abs(ratio - 1.0) < 1e-2
    # the same law makes phi'' vanish like x^(-2 lam - 2)
    lam = 0.1
    pred = 2.0 * lam * (2.0 * lam + 1.0) * SQRT_2PI * 50.0 ** (-2.0 * lam - 2.0)
    got = phi_d2(lam, 50.0)
    assert abs(got) < 1e-3
    assert 0.5 * pred < got < 2.0 * pred


def test_decay_toward_minus_infinity_is_gaussian():
    lam = 0.3
    assert phi(lam, -20.0) < 1e-6 * phi(lam, 0.0)
    v = phi(lam, -50.0)
    assert 0.0 < v < phi(lam, 0.0)  # positivity floor below float range


def test_psi_reduces_to_phi():
    lam, x = 0.25, 0.8
    c = PsiCoefficients(1.0, 0.0)
    assert psi(lam, c, x, 0) == phi(lam, x)
    assert psi(lam, c, x, 1) == phi_d1(lam, x)
    assert psi(lam, c, x, 2) == phi_d2(lam, x)


def test_psi_even_combination():
    lam = 0.2
    c = (1.0, 1.0)
    for x in (0.3, 1.7, -2.4):
        assert psi(lam, c, x, 0) == pytest.approx(psi(lam, c, -x, 0), abs=1e-14)
        assert psi(lam, c, x, 1) == pytest.approx(-psi(lam, c, -x, 1), abs=1e-14)


def test_psi_curvature_vanishes_at_z(ref):
    z = ref["critical_points"]["0.25"]["z"]
    assert abs(psi(0.25, (1.0, 1.0), z, 2)) < 1e-8


def test_psi_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        psi(0.25, (0.0, 0.0), 1.0)
    with pytest.raises(InvalidParameter):
        psi(0.25, (1.0, 1.0), 1.0, derivative_order=3)
    with pytest.raises(InvalidParameter):
        PsiCoefficients(0.0, 0.0)


def test_lambda_param_validation():
    assert LambdaParam(0.25).value == 0.25
    for bad in (0.0, 0.5, 1.0):
        with pytest.raises(InvalidParameter):
            LambdaParam(bad)
    # wrapper accepted anywhere a bare float is
    assert phi(LambdaParam(0.25), 0.0) == phi(0.25, 0.0)


def test_bundle_matches_scalar_routes():
    lam, x = 0.3, -0.7
    e = phi_bundle(lam, x)
    assert isinstance(e, PhiEval)
    assert e.phi == pytest.approx(phi(lam, x), abs=1e-12)
    assert e.d1 == pytest.approx(phi_d1(lam, x), abs=1e-12)
    assert e.d2 == pytest.approx(phi_d2(lam, x), abs=1e-12)
    assert e.phi > 0.0
