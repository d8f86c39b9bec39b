"""Glued explicit positive solutions of the max-form second-order ODE.

For sigma in [sigma(lam), 1] the function built here is even, strictly
positive, C^2, concave strictly between the symmetric gluing points
+-sigma*z and convex outside, and solves

    (y'')+ - sigma^2 (y'')- + x y' + 2*lam*y = 0

pointwise.  The middle piece is phi(x/sigma) + phi(-x/sigma); the outer
pieces are combinations mu2*phi(x) + mu1*phi(-x) (right) and the mirror
(left), with mu1 > 0 and mu2 >= 0 chosen so value and curvature match at the
gluing points.  Its parabolic rescaling

    u(t, x) = (1 + t)^(-lam) * H(x / sqrt(1 + t))

then solves the G-heat equation d_t u = G(d^2_xx u), G(a) = (a+ - sigma^2 a-)/2,
with initial datum H, which is what the PDE cross-checks exercise.

Below sigma(lam) no positive solution exists and build_H refuses to
manufacture one.
"""

from __future__ import annotations

import math
import threading
from dataclasses import asdict, dataclass

import numpy as np

from .critical_points import as_sigma, critical_points, lambda_of_sigma
from .errors import (ConsistencyFailure, InvalidParameter, QuadratureFailure,
                     RangeError)
from .quadrature import QuadratureConfig, _as_lambda
from .special_functions import PhiEval, _as_coeffs, phi_bundle, psi

_MU2_CLAMP = 1e-12

_lock = threading.Lock()
_p_cache: dict = {}
_hermite_cache: dict = {}


@dataclass(frozen=True)
class PiecewiseSolution:
    """Parameters of one glued solution; immutable and freely shareable."""

    lam: float
    sigma: float
    z: float
    mu1: float
    mu2: float
    breakpoint: float

    def as_dict(self) -> dict:
        """Serialisable form; the decay exponent exports as 'lambda'."""
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: d[k] for k in
                ("lambda", "sigma", "z", "mu1", "mu2", "breakpoint")}


def _pair(lam: float, u: float, config) -> tuple[PhiEval, PhiEval]:
    return phi_bundle(lam, u, config), phi_bundle(lam, -u, config)


def _h_all(sol: PiecewiseSolution, x: float, config=None):
    """H, H' and H'' at one point (two shared quadrature passes)."""
    x = float(x)
    if abs(x) < sol.breakpoint:
        ep, em = _pair(sol.lam, x / sol.sigma, config)
        inv = 1.0 / sol.sigma
        return (ep.phi + em.phi,
                inv * (ep.d1 - em.d1),
                inv * inv * (ep.d2 + em.d2))
    sign = 1.0 if x >= 0.0 else -1.0
    ep, em = _pair(sol.lam, abs(x), config)
    return (sol.mu2 * ep.phi + sol.mu1 * em.phi,
            sign * (sol.mu2 * ep.d1 - sol.mu1 * em.d1),
            sol.mu2 * ep.d2 + sol.mu1 * em.d2)


def _eval_middle(sol: PiecewiseSolution, x: float, order: int, config=None) -> float:
    ep, em = _pair(sol.lam, x / sol.sigma, config)
    inv = 1.0 / sol.sigma
    if order == 0:
        return ep.phi + em.phi
    if order == 1:
        return inv * (ep.d1 - em.d1)
    return inv * inv * (ep.d2 + em.d2)


def _eval_outer(sol: PiecewiseSolution, x: float, order: int, config=None) -> float:
    sign = 1.0 if x >= 0.0 else -1.0
    ep, em = _pair(sol.lam, abs(x), config)
    if order == 0:
        return sol.mu2 * ep.phi + sol.mu1 * em.phi
    if order == 1:
        return sign * (sol.mu2 * ep.d1 - sol.mu1 * em.d1)
    return sol.mu2 * ep.d2 + sol.mu1 * em.d2


def build_H(lam, sigma, tol: float = 1e-10,
            config: QuadratureConfig | None = None) -> PiecewiseSolution:
    """Construct the glued solution for sigma in [sigma(lam), 1].

    Raises RangeError for sigma below sigma(lam): there the problem has no
    positive solution at this lam (equivalently, lam exceeds lambda(sigma)).
    The curvature-gluing identity mu2*phi''(bp) + mu1*phi''(-bp) = 0 is
    verified to 1e-8 relative before the solution is returned.
    """
    lam = _as_lambda(lam)
    sigma = as_sigma(sigma)
    cp = critical_points(lam, tol, config)
    slack = max(100.0 * tol, 1e-8)
    if sigma < cp.sigma_lambda - slack:
        raise RangeError(
            f"sigma={sigma} is below sigma_lambda={cp.sigma_lambda:.12f} at "
            f"lambda={lam}; no positive solution exists there "
            "(equivalently lambda exceeds lambda_sigma)")

    bp = sigma * cp.z
    ep, em = _pair(lam, bp, config)
    ezp, ezm = _pair(lam, cp.z, config)
    a, c = ep.phi, ep.d2
    b, d = em.phi, em.d2
    total = ezp.phi + ezm.phi
    denom = b * c - a * d
    mu1 = c * total / denom
    mu2 = -d * total / denom
    if abs(mu2) < _MU2_CLAMP:
        mu2 = 0.0

    glue = mu2 * c + mu1 * d
    scale = max(abs(mu1 * c), abs(mu1 * d), abs(mu2 * c))
    if abs(glue) > 1e-8 * scale:
        raise ConsistencyFailure(
            f"curvature gluing violated: |{glue!r}| > 1e-8 * {scale!r}")
    mid_curv = ezp.d2 + ezm.d2
    if abs(mid_curv) > max(1e-6, 1e3 * tol):
        raise ConsistencyFailure(
            f"phi''(z) + phi''(-z) = {mid_curv!r} not near zero; bad z root")

    return PiecewiseSolution(lam=lam, sigma=sigma, z=cp.z,
                             mu1=mu1, mu2=mu2, breakpoint=bp)


def build_P(sigma, tol: float = 1e-10,
            config: QuadratureConfig | None = None) -> PiecewiseSolution:
    """The solution at the extreme admissible pairing lam = lambda(sigma).

    There the gluing point collapses onto -x1, the outer curvature vanishes,
    and the outer pieces reduce to a single positive multiple of phi:
    mu2 = 0 and mu1 = [phi(-z) + phi(z)] / phi(x1).  Cached per process.
    """
    sigma = as_sigma(sigma)
    if not sigma < 1.0:
        raise InvalidParameter("sigma must be strictly below 1 here")
    key = (sigma, tol, config)
    with _lock:
        hit = _p_cache.get(key)
    if hit is not None:
        return hit
    lam_s = lambda_of_sigma(sigma, tol, config)
    cp = critical_points(lam_s, tol, config)
    bp = sigma * cp.z
    ezp, ezm = _pair(lam_s, cp.z, config)
    mu1 = (ezp.phi + ezm.phi) / phi_bundle(lam_s, -bp, config).phi
    sol = PiecewiseSolution(lam=lam_s, sigma=sigma, z=cp.z,
                            mu1=mu1, mu2=0.0, breakpoint=bp)
    with _lock:
        _p_cache[key] = sol
    return sol


def eval_H(sol: PiecewiseSolution, x, order: int = 0,
           config: QuadratureConfig | None = None) -> float:
    """Piecewise evaluation of the solution or its first two derivatives."""
    if order not in (0, 1, 2):
        raise InvalidParameter("order must be 0, 1 or 2")
    x = float(x)
    if abs(x) < sol.breakpoint:
        return _eval_middle(sol, x, order, config)
    return _eval_outer(sol, x, order, config)


def ode_residual(sol: PiecewiseSolution, x,
                 config: QuadratureConfig | None = None) -> float:
    """(H'')+ - sigma^2 (H'')- + x H' + 2 lam H at x; near 0 when healthy."""
    h, h1, h2 = _h_all(sol, float(x), config)
    pos = h2 if h2 > 0.0 else 0.0
    neg = -h2 if h2 < 0.0 else 0.0
    return pos - sol.sigma * sol.sigma * neg + float(x) * h1 + 2.0 * sol.lam * h


def eval_self_similar(sol: PiecewiseSolution, t, x,
                      config: QuadratureConfig | None = None) -> float:
    """(1 + t)^(-lam) H(x / sqrt(1 + t)): the exact G-heat solution at (t, x)."""
    t = float(t)
    if t < 0.0:
        raise InvalidParameter("t must be nonnegative")
    s = math.sqrt(1.0 + t)
    return (1.0 + t) ** (-sol.lam) * eval_H(sol, float(x) / s, 0, config)


def _hermite_rule(n: int):
    with _lock:
        rule = _hermite_cache.get(n)
    if rule is None:
        rule = np.polynomial.hermite.hermgauss(n)
        with _lock:
            _hermite_cache[n] = rule
    return rule


def _hermite_expectation(lam, mu1, mu2, t, x, n, config) -> float:
    """E[psi(x + sqrt(t) Z)] with Z standard normal, by Gauss-Hermite."""
    nodes, weights = _hermite_rule(n)
    shift = math.sqrt(2.0 * t)
    vals = np.array([psi(lam, (mu1, mu2), x + shift * u, 0, config)
                     for u in nodes])
    return float(weights @ vals) / math.sqrt(math.pi)


def heat_check_sigma1(lam, coeffs, t, x,
                      config: QuadratureConfig | None = None,
                      nodes: int = 64) -> tuple[float, float]:
    """Classical-heat cross-check at sigma = 1.

    Returns (closed_form, convolution): the parabolic rescaling
    (1+t)^(-lam) psi(x/sqrt(1+t)) against the Gaussian convolution
    E[psi(x + sqrt(t) Z)] evaluated by Gauss-Hermite quadrature with a
    node-doubling convergence check.  The two must agree because both equal
    the heat-equation solution with initial datum psi.
    """
    lam = _as_lambda(lam)
    t = float(t)
    x = float(x)
    if t < 0.0:
        raise InvalidParameter("t must be nonnegative")
    mu1, mu2 = _as_coeffs(coeffs)
    closed = (1.0 + t) ** (-lam) * psi(lam, (mu1, mu2), x / math.sqrt(1.0 + t),
                                       0, config)
    if t == 0.0:
        return closed, psi(lam, (mu1, mu2), x, 0, config)
    conv = _hermite_expectation(lam, mu1, mu2, t, x, nodes, config)
    conv2 = _hermite_expectation(lam, mu1, mu2, t, x, 2 * nodes, config)
    if abs(conv - conv2) > 1e-8 * max(1.0, abs(conv2)):
        raise QuadratureFailure(
            f"Gauss-Hermite convolution unconverged: {conv!r} vs {conv2!r} "
            "under node doubling")
    return closed, conv2
