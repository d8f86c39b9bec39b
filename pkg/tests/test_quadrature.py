import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gheat.errors import InvalidParameter, NonConvergent
from gheat.quadrature import (DEFAULT_CONFIG, QuadratureConfig,
                              moment_integral, moment_integrals)

LAMS = (0.1, 0.25, 0.4)
XS = (-2.0, -1.0, 0.0, 1.0, 2.0, 5.0)


@pytest.mark.parametrize("lam", LAMS)
def test_gamma_identity_p1(lam):
    # closed form at x = 0 via u = y^2/2: 2^(-lam-1/2) * Gamma(1/2 - lam)
    r = moment_integral(lam, 0.0, [1.0])
    want = 2.0 ** (-lam - 0.5) * math.gamma(0.5 - lam)
    assert abs(r.value - want) < 1e-10
    assert r.error_estimate <= 10.0 * DEFAULT_CONFIG.abs_tol
    assert r.panels_used >= 1


def test_gamma_identity_first_moment():
    r = moment_integral(0.25, 0.0, [0.0, 1.0])
    want = 2.0 ** (-0.25) * math.gamma(0.75)
    assert abs(r.value - want) < 1e-10


def test_second_derivative_forms_agree():
    # p(t) = t^2 - 1 and p(t) = -2*lam - x*t give the same integral
    lam, x = 0.3, 2.0
    r1 = moment_integral(lam, x, [-1.0, 0.0, 1.0])
    r2 = moment_integral(lam, x, [-2.0 * lam, -x, 0.0])
    assert abs(r1.value - r2.value) <= 2.0 * DEFAULT_CONFIG.abs_tol


def test_frozen_spot_values(ref):
    for spot in ref["moment_spots"]:
        r = moment_integral(spot["lam"], spot["x"], spot["poly"])
        assert abs(r.value - spot["value"]) < 1e-10


@pytest.mark.parametrize("lam", LAMS)
@pytest.mark.parametrize("x", XS)
def test_refinement_self_consistency(lam, x):
    loose = QuadratureConfig(abs_tol=1e-10)
    tight = QuadratureConfig(abs_tol=1e-12)
    poly = [0.3, -1.0, 0.7]
    a = moment_integral(lam, x, poly, loose)
    b = moment_integral(lam, x, poly, tight)
    assert abs(a.value - b.value) < 1e-9


def test_tail_cutoff_invariance():
    base = moment_integral(0.25, 1.5, [1.0, 2.0, 1.0])
    far = moment_integral(0.25, 1.5, [1.0, 2.0, 1.0],
                          QuadratureConfig(tail_cutoff_sigmas=20.0))
    assert abs(base.value - far.value) < DEFAULT_CONFIG.abs_tol


@pytest.mark.parametrize("lam", LAMS)
@pytest.mark.parametrize("x", XS + (-8.0,))
def test_positivity_of_weight_integral(lam, x):
    assert moment_integral(lam, x, [1.0]).value > 0.0


def test_batched_matches_single_calls():
    polys = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]
    vals, err, _ = moment_integrals(0.2, 0.7, polys)
    for row, v in zip(polys, vals):
        assert abs(moment_integral(0.2, 0.7, row).value - v) < 1e-11
    assert err >= 0.0


@settings(max_examples=20, deadline=None)
@given(scale=st.floats(min_value=0.1, max_value=50.0),
       lam=st.floats(min_value=0.08, max_value=0.42),
       x=st.floats(min_value=-3.0, max_value=3.0))
def test_scaling_linearity(scale, lam, x):
    base = moment_integral(lam, x, [0.5, -1.0, 2.0]).value
    scaled = moment_integral(lam, x, [0.5 * scale, -scale, 2.0 * scale]).value
    assert scaled == pytest.approx(scale * base, rel=1e-10, abs=1e-11)


def test_lambda_domain_is_open():
    for lam in (0.0, 0.5, 0.6, -0.1):
        with pytest.raises(InvalidParameter):
            moment_integral(lam, 0.0, [1.0])


def test_poly_degree_capped():
    with pytest.raises(InvalidParameter):
        moment_integral(0.25, 0.0, [1.0, 1.0, 1.0, 1.0])


def test_nonfinite_rejected():
    with pytest.raises(InvalidParameter):
        moment_integral(0.25, math.inf, [1.0])
    with pytest.raises(InvalidParameter):
        moment_integral(0.25, 0.0, [math.nan])


def test_config_invariants():
    with pytest.raises(InvalidParameter):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(InvalidParameter):
        QuadratureConfig(split_point=-1.0)
    with pytest.raises(InvalidParameter):
        QuadratureConfig(tail_cutoff_sigmas=5.0)
    with pytest.raises(InvalidParameter):
        QuadratureConfig(max_subdivisions=0)


def test_weak_tail_cutoff_is_refused():
    # T = 6 leaves a tail bound far above abs_tol/10 at tight tolerance
    cfg = QuadratureConfig(abs_tol=1e-13, tail_cutoff_sigmas=6.0)
    with pytest.raises(NonConvergent):
        moment_integral(0.25, 0.0, [1.0, 1.0, 1.0], cfg)


def test_underflow_returns_zero_not_garbage():
    # the true value is ~ exp(-1250), far below float64: collapses to 0.0
    r = moment_integral(0.3, -50.0, [1.0])
    assert r.value == 0.0
    assert np.isfinite(r.error_estimate)
