"""The positive special function behind every explicit solution.

phi(lam, .) is the singular-weight Gaussian moment integral with p = 1.  It
is strictly positive on the real line and solves the linear ODE

    y'' + x y' + 2*lam*y = 0,        0 < lam < 1/2,

whose general solution is mu1*phi(x) + mu2*phi(-x).  First and second
derivatives are moment integrals with p(t) = t and p(t) = t^2 - 1; the second
derivative also equals the integral with p(t) = -2*lam - x*t, and both forms
are always evaluated and cross-checked.  The third derivative follows from
differentiating the ODE.

Everything here is a pure function of its arguments; caching, if any, lives
with the callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyFailure, InvalidParameter
from .quadrature import QuadratureConfig, _as_lambda, moment_integrals

# Positivity floor for values that underflow float64: phi is positive on all
# of R, but for x << -40 the integrand is below the smallest subnormal.
_TINY = math.ulp(0.0)

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class LambdaParam:
    """Decay exponent of the self-similar family; open interval (0, 1/2)."""

    value: float

    def __post_init__(self):
        if not 0.0 < self.value < 0.5:
            raise InvalidParameter(f"lambda must lie in (0, 1/2), got {self.value}")


@dataclass(frozen=True)
class PsiCoefficients:
    """Coefficients (mu1, mu2) of mu1*phi(x) + mu2*phi(-x); not both zero."""

    mu1: float
    mu2: float

    def __post_init__(self):
        if self.mu1 == 0.0 and self.mu2 == 0.0:
            raise InvalidParameter("mu1 and mu2 must not both vanish")


@dataclass(frozen=True)
class PhiEval:
    """phi, phi', phi'' at one point plus the quadrature error estimate."""

    phi: float
    d1: float
    d2: float
    err: float

    def ode_residual(self, lam: float, x: float) -> float:
        """Residual of y'' + x y' + 2 lam y at this point; near 0 when healthy."""
        return self.d2 + x * self.d1 + 2.0 * lam * self.phi


def _as_coeffs(coeffs) -> tuple[float, float]:
    if isinstance(coeffs, PsiCoefficients):
        return coeffs.mu1, coeffs.mu2
    mu1, mu2 = (float(c) for c in coeffs)
    if mu1 == 0.0 and mu2 == 0.0:
        raise InvalidParameter("mu1 and mu2 must not both vanish")
    return mu1, mu2


def _combine_d2(r1: float, r2: float, err: float) -> float:
    scale = max(abs(r1), abs(r2), 1e-300)
    tol = 10.0 * (2.0 * err + 64.0 * _EPS * scale)
    if abs(r1 - r2) > tol:
        raise ConsistencyFailure(
            "second-derivative integrand forms disagree: "
            f"{r1!r} vs {r2!r} beyond {tol:.3e}; quadrature fault")
    return 0.5 * (r1 + r2)


def phi_bundle(lam, x, config: QuadratureConfig | None = None) -> PhiEval:
    """phi and its first two derivatives from one shared adaptive pass."""
    lam = _as_lambda(lam)
    x = float(x)
    polys = np.array([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [-1.0, 0.0, 1.0],
        [-2.0 * lam, -x, 0.0],
    ])
    vals, err, _ = moment_integrals(lam, x, polys, config)
    d2 = _combine_d2(float(vals[2]), float(vals[3]), err)
    p = float(vals[0])
    return PhiEval(phi=p if p > 0.0 else _TINY, d1=float(vals[1]), d2=d2, err=err)


def phi(lam, x, config: QuadratureConfig | None = None) -> float:
    """The positive solution itself.

    Underflowed values are floored at the smallest positive subnormal so the
    documented positivity is preserved for arbitrarily negative x.
    """
    lam = _as_lambda(lam)
    vals, _, _ = moment_integrals(lam, float(x), [[1.0, 0.0, 0.0]], config)
    v = float(vals[0])
    return v if v > 0.0 else _TINY


def phi_d1(lam, x, config: QuadratureConfig | None = None) -> float:
    lam = _as_lambda(lam)
    vals, _, _ = moment_integrals(lam, float(x), [[0.0, 1.0, 0.0]], config)
    return float(vals[0])


def phi_d2(lam, x, config: QuadratureConfig | None = None) -> float:
    """Second derivative through both integrand forms, cross-checked."""
    lam = _as_lambda(lam)
    x = float(x)
    vals, err, _ = moment_integrals(
        lam, x, [[-1.0, 0.0, 1.0], [-2.0 * lam, -x, 0.0]], config)
    return _combine_d2(float(vals[0]), float(vals[1]), err)


def phi_d3(lam, x, config: QuadratureConfig | None = None) -> float:
    """Third derivative from the differentiated ODE.

    Computed as (-2*lam - 1)*phi'(x) - x*phi''(x) and cross-checked against
    the equivalent (x^2 - 2*lam - 1)*phi'(x) + 2*lam*x*phi(x).
    """
    lam = _as_lambda(lam)
    x = float(x)
    e = phi_bundle(lam, x, config)
    r1 = (-2.0 * lam - 1.0) * e.d1 - x * e.d2
    r2 = (x * x - 2.0 * lam - 1.0) * e.d1 + 2.0 * lam * x * e.phi
    scale = max(abs(r1), abs(r2), 1.0)
    tol = 10.0 * abs(x) * (2.0 + abs(x)) * e.err + 1e4 * _EPS * scale
    if abs(r1 - r2) > tol:
        raise ConsistencyFailure(
            f"third-derivative routes disagree: {r1!r} vs {r2!r} beyond {tol:.3e}")
    return r1


def psi(lam, coeffs, x, derivative_order: int = 0,
        config: QuadratureConfig | None = None) -> float:
    """mu1*phi^(k)(x) + (-1)^k * mu2*phi^(k)(-x) for k = 0, 1 or 2."""
    lam = _as_lambda(lam)
    if derivative_order not in (0, 1, 2):
        raise InvalidParameter("derivative_order must be 0, 1 or 2")
    mu1, mu2 = _as_coeffs(coeffs)
    f = (phi, phi_d1, phi_d2)[derivative_order]
    sign = -1.0 if derivative_order == 1 else 1.0
    return mu1 * f(lam, x, config) + sign * mu2 * f(lam, -x, config)
