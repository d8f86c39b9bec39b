"""Adaptive evaluation of singular-weight Gaussian moment integrals.

Every special-function value in this package reduces to an integral of the
form

    I(lam, x, p) = int_0^inf  y^(-2*lam) * p(y - x) * exp(-(y - x)^2 / 2) dy

with 0 < lam < 1/2 and p a polynomial of degree at most two in t = y - x.
The weight y^(-2*lam) has an integrable endpoint singularity at y = 0.  The
substitution y = s**(1/(1 - 2*lam)) removes it exactly,

    y^(-2*lam) dy = ds / (1 - 2*lam),

leaving a bounded integrand on [0, split_point].  The remaining smooth region
[split_point, x + T] is handled by nested interval bisection with a 15-point
Gauss-Legendre panel rule, the error of each panel estimated by comparing the
rule with its two-half refinement.  Beyond x + T the Gaussian tail is bounded
analytically and required to be negligible, never integrated.

All functions here are pure and reentrant; nothing is cached or mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NonConvergent

# Fixed-order smooth panel rule on [-1, 1].
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)
_PANEL_LIMIT = 16384


@dataclass(frozen=True)
class QuadratureConfig:
    """Accuracy knobs for the moment integrals.

    abs_tol is a target absolute error for the full integral.  split_point
    separates the desingularised panel from the smooth region.  The Gaussian
    tail is cut at x + tail_cutoff_sigmas and bounded analytically; values
    below ~8 make that bound too weak for tight tolerances and are rejected
    at evaluation time.  max_subdivisions caps the bisection depth per panel.
    """

    abs_tol: float = 1e-12
    split_point: float = 1.0
    tail_cutoff_sigmas: float = 10.0
    max_subdivisions: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise InvalidParameter("abs_tol must be positive")
        if not self.split_point > 0.0:
            raise InvalidParameter("split_point must be positive")
        if not self.tail_cutoff_sigmas >= 6.0:
            raise InvalidParameter("tail_cutoff_sigmas must be at least 6")
        if not self.max_subdivisions >= 1:
            raise InvalidParameter("max_subdivisions must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    panels_used: int


def _as_lambda(lam) -> float:
    lam = float(getattr(lam, "value", lam))
    if not 0.0 < lam < 0.5:
        raise InvalidParameter(f"lambda must lie in (0, 1/2), got {lam}")
    return lam


def _adaptive(f, edges: np.ndarray, budget: float, max_depth: int):
    """Integrate the vector-valued f over the span of `edges` by bisection.

    f maps a point array (n,) to values (ncomp, n).  The absolute-error
    budget is spread over panels proportionally to width; a panel whose
    coarse/fine disagreement is below its share is accepted at the fine
    value.  Returns (values, error_estimate, panels_used).
    """
    width = float(edges[-1] - edges[0])
    lo = np.asarray(edges[:-1], dtype=float)
    hi = np.asarray(edges[1:], dtype=float)
    depth = np.zeros(lo.size, dtype=int)

    ncomp = None
    total = None
    err_total = 0.0
    panels_used = 0

    while lo.size:
        if lo.size > _PANEL_LIMIT:
            raise NonConvergent("adaptive panel count exploded")
        h = hi - lo
        mid = 0.5 * (lo + hi)
        quarter = 0.25 * h
        # coarse rule on the panel plus the rule on each half
        pts = np.concatenate([
            (mid[:, None] + 0.5 * h[:, None] * _NODES).ravel(),
            ((lo + quarter)[:, None] + quarter[:, None] * _NODES).ravel(),
            ((hi - quarter)[:, None] + quarter[:, None] * _NODES).ravel(),
        ])
        vals = f(pts)
        if ncomp is None:
            ncomp = vals.shape[0]
            total = np.zeros(ncomp)
        k = lo.size
        vals = vals.reshape(ncomp, 3, k, _NODES.size)
        sums = vals @ _WEIGHTS                      # (ncomp, 3, k)
        coarse = sums[:, 0, :] * (0.5 * h)
        fine = (sums[:, 1, :] + sums[:, 2, :]) * quarter
        err = np.abs(fine - coarse).max(axis=0)     # (k,)

        share = budget * (h / width)
        floor = 16.0 * np.finfo(float).eps * np.maximum.reduce(
            [np.abs(lo), np.abs(hi), np.ones(k)])
        done = (err <= share) | (h <= floor) | (depth >= max_depth)

        if done.any():
            total += fine[:, done].sum(axis=1)
            err_total += float(err[done].sum())
            panels_used += int(done.sum())
        keep = ~done
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        depth = np.concatenate([depth[keep] + 1, depth[keep] + 1])

    if total is None:
        total = np.zeros(1)
    return total, err_total, panels_used


def moment_integrals(lam, x, polys, config: QuadratureConfig | None = None):
    """Evaluate several moment integrals sharing (lam, x) in one pass.

    polys is array-like of shape (ncomp, k<=3): rows of coefficients
    (c0, c1, c2) for p(t) = c0 + c1*t + c2*t^2 with t = y - x.  Refinement is
    driven by the worst component, so all components come from one panel set.
    Returns (values, error_estimate, panels_used) with values of shape
    (ncomp,).
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    lam = _as_lambda(lam)
    x = float(x)
    if not math.isfinite(x):
        raise InvalidParameter("x must be finite")
    coeffs = np.atleast_2d(np.asarray(polys, dtype=float))
    if coeffs.ndim != 2 or coeffs.shape[1] > 3 or coeffs.shape[1] == 0:
        raise InvalidParameter("polynomials must have degree at most 2")
    if coeffs.shape[1] < 3:
        coeffs = np.pad(coeffs, ((0, 0), (0, 3 - coeffs.shape[1])))
    if not np.all(np.isfinite(coeffs)):
        raise InvalidParameter("polynomial coefficients must be finite")

    split = cfg.split_point
    y_max = max(split, x + cfg.tail_cutoff_sigmas)

    # Analytic bound on the discarded tail: for y >= y_max the weight is at
    # most y_max^(-2 lam) and, with t = y - x >= t_lo,
    #   int t^k exp(-t^2/2) dt  <=  {1/t_lo, 1, t_lo + 1/t_lo} * exp(-t_lo^2/2).
    t_lo = y_max - x
    damp = math.exp(-0.5 * t_lo * t_lo) * y_max ** (-2.0 * lam)
    tail = float(np.max(damp * (np.abs(coeffs[:, 0]) / t_lo
                                + np.abs(coeffs[:, 1])
                                + np.abs(coeffs[:, 2]) * (t_lo + 1.0 / t_lo))))
    if not tail < cfg.abs_tol / 10.0:
        raise NonConvergent(
            f"tail bound {tail:.3e} is not below abs_tol/10; "
            "increase tail_cutoff_sigmas or relax abs_tol")

    alpha = 1.0 / (1.0 - 2.0 * lam)
    c0 = coeffs[:, 0][:, None]
    c1 = coeffs[:, 1][:, None]
    c2 = coeffs[:, 2][:, None]

    def f_desing(s):
        y = s ** alpha
        t = y - x
        return (c0 + (c1 + c2 * t) * t) * (np.exp(-0.5 * t * t) * alpha)

    def f_smooth(y):
        t = y - x
        return (c0 + (c1 + c2 * t) * t) * (y ** (-2.0 * lam) * np.exp(-0.5 * t * t))

    budget = cfg.abs_tol / 4.0
    # For lam near 1/2 the map s -> s^alpha confines all variation to a thin
    # layer at the right edge; geometric initial breaks toward that edge keep
    # the layer visible to the panel rule instead of slipping between nodes.
    s_max = split ** (1.0 - 2.0 * lam)
    frac = 1.0 - np.concatenate(([1.0], 0.5 ** np.arange(1, 11), [0.0]))
    values, err, panels = _adaptive(
        f_desing, s_max * frac, budget, cfg.max_subdivisions)
    if y_max > split:
        n0 = min(64, max(4, int(math.ceil(y_max - split))))
        v2, e2, p2 = _adaptive(f_smooth, np.linspace(split, y_max, n0 + 1),
                               budget, cfg.max_subdivisions)
        values = values + v2
        err += e2
        panels += p2

    err += tail
    if err > 10.0 * cfg.abs_tol:
        raise NonConvergent(
            f"error estimate {err:.3e} exceeds 10*abs_tol at max_subdivisions")
    return values, err, panels


def moment_integral(lam, x, poly, config: QuadratureConfig | None = None) -> IntegralResult:
    """Single moment integral; see :func:`moment_integrals` for the form."""
    values, err, panels = moment_integrals(lam, x, np.atleast_2d(poly), config)
    return IntegralResult(value=float(values[0]), error_estimate=err, panels_used=panels)
