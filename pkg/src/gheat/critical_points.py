"""Per-lambda critical constants of the special function.

For each lambda in (0, 1/2) the second derivative of phi has exactly one zero
x1 in (-1, 0) and one zero x2 in (1, +inf), is negative between them and
positive outside.  The even combination phi''(u) + phi''(-u) then has a
single zero z in (-x1, x2), and z > 1.  The ratio

    sigma(lam) = -x1 / z

is continuous, strictly increasing, and runs from 0 to 1, so it has a
well-defined inverse lambda(sigma).  All roots are located by plain bisection
on brackets whose signs are guaranteed by that structure; a violated sign is
reported as a quadrature fault, never masked.

Results for guarantee purposes are only claimed on lambda in [0.02, 0.48] and
sigma in [0.05, 0.98]; outside, computations run best effort after emitting a
RangeWarning.  The lambda(sigma) bracket comes from a 41-point table of
sigma(lam) built once per process at reduced tolerance and shared, read-only,
across threads.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (BracketFailure, InvalidParameter, NonConvergent,
                     RangeWarning, ScanExhausted)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, _as_lambda
from .special_functions import phi_d2

SUPPORTED_LAMBDA = (0.02, 0.48)
SUPPORTED_SIGMA = (0.05, 0.98)

DEFAULT_ROOT_TOL = 1e-10

_X2_SCAN_LIMIT = 64.0
_TABLE_SIZE = 41

_lock = threading.Lock()
_cp_cache: dict = {}
_table_cache: dict = {}
_inverse_cache: dict = {}


@dataclass(frozen=True)
class SigmaParam:
    """Lower volatility bound; sigma in (0, 1], strict on the left."""

    value: float

    def __post_init__(self):
        if not 0.0 < self.value <= 1.0:
            raise InvalidParameter(f"sigma must lie in (0, 1], got {self.value}")


@dataclass(frozen=True)
class CriticalPoints:
    """The constants x1 < 0 < -x1 < z < x2 and sigma_lambda = -x1/z."""

    lam: float
    x1: float
    x2: float
    z: float
    sigma_lambda: float
    root_tol: float


def as_sigma(sigma) -> float:
    sigma = float(getattr(sigma, "value", sigma))
    if not 0.0 < sigma <= 1.0:
        raise InvalidParameter(f"sigma must lie in (0, 1], got {sigma}")
    return sigma


def _check_tol(tol: float):
    if not tol > 0.0:
        raise InvalidParameter("tol must be positive")


def _warn_outside(value: float, lo: float, hi: float, name: str):
    if not lo <= value <= hi:
        warnings.warn(
            f"{name}={value} is outside the supported range [{lo}, {hi}]; "
            "results are best effort", RangeWarning, stacklevel=3)


def _bisect(f, lo: float, hi: float, tol: float, lo_positive: bool,
            what: str) -> float:
    flo, fhi = f(lo), f(hi)
    ok = (flo > 0.0 > fhi) if lo_positive else (flo < 0.0 < fhi)
    if not ok:
        raise BracketFailure(
            f"no sign change for {what} on [{lo}, {hi}]: "
            f"f(lo)={flo!r}, f(hi)={fhi!r}")
    guard = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        fm = f(mid)
        if (fm > 0.0) == lo_positive:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        guard += 1
        if guard > 200:
            raise NonConvergent(f"bisection for {what} did not terminate")
    return 0.5 * (lo + hi)


def find_x1(lam, tol: float = DEFAULT_ROOT_TOL,
            config: QuadratureConfig | None = None) -> float:
    """Unique zero of phi'' in (-1, 0); phi''(-1) > 0 > phi''(0)."""
    lam = _as_lambda(lam)
    _check_tol(tol)
    f = lambda u: phi_d2(lam, u, config)
    return _bisect(f, -1.0 + 1e-12, -1e-12, tol, lo_positive=True, what="x1")


def find_x2(lam, tol: float = DEFAULT_ROOT_TOL,
            config: QuadratureConfig | None = None) -> float:
    """Unique zero of phi'' in (1, inf), bracketed by a doubling scan."""
    lam = _as_lambda(lam)
    _check_tol(tol)
    f = lambda u: phi_d2(lam, u, config)
    lo, flo = 1.0, f(1.0)
    if not flo < 0.0:
        raise BracketFailure(f"phi''(1) = {flo!r} is not negative; quadrature fault")
    hi = 2.0
    while True:
        fhi = f(hi)
        if fhi > 0.0:
            break
        lo, hi = hi, 2.0 * hi
        if hi > _X2_SCAN_LIMIT:
            raise ScanExhausted(
                f"no sign change of phi'' below x = {_X2_SCAN_LIMIT:g}; "
                "lambda is too close to 0 for the supported range")
    return _bisect(f, lo, hi, tol, lo_positive=False, what="x2")


def find_z(lam, tol: float = DEFAULT_ROOT_TOL,
           config: QuadratureConfig | None = None,
           x1: float | None = None, x2: float | None = None) -> float:
    """Unique zero of phi''(u) + phi''(-u) in (-x1, x2)."""
    lam = _as_lambda(lam)
    _check_tol(tol)
    if x1 is None:
        x1 = find_x1(lam, tol, config)
    if x2 is None:
        x2 = find_x2(lam, tol, config)
    g = lambda u: phi_d2(lam, u, config) + phi_d2(lam, -u, config)
    return _bisect(g, -x1, x2, tol, lo_positive=False, what="z")


def find_z2_diagnostic(lam, k: float, tol: float = DEFAULT_ROOT_TOL,
                       config: QuadratureConfig | None = None) -> float:
    """Zero of k*phi''(u) + phi''(-u) in (-x1, x2); diagnostic only, k >= 1."""
    lam = _as_lambda(lam)
    _check_tol(tol)
    k = float(k)
    if not k >= 1.0:
        raise InvalidParameter(f"k must be at least 1, got {k}")
    cp = critical_points(lam, tol, config)
    h = lambda u: k * phi_d2(lam, u, config) + phi_d2(lam, -u, config)
    return _bisect(h, -cp.x1, cp.x2, tol, lo_positive=False, what="z2")


def critical_points(lam, tol: float = DEFAULT_ROOT_TOL,
                    config: QuadratureConfig | None = None) -> CriticalPoints:
    """All per-lambda constants in one (cached) bundle."""
    lam = _as_lambda(lam)
    _check_tol(tol)
    cfg = config if config is not None else DEFAULT_CONFIG
    key = (lam, tol, cfg)
    with _lock:
        hit = _cp_cache.get(key)
    if hit is not None:
        return hit
    _warn_outside(lam, *SUPPORTED_LAMBDA, name="lambda")
    x1 = find_x1(lam, tol, cfg)
    x2 = find_x2(lam, tol, cfg)
    z = find_z(lam, tol, cfg, x1=x1, x2=x2)
    cp = CriticalPoints(lam=lam, x1=x1, x2=x2, z=z,
                        sigma_lambda=-x1 / z, root_tol=tol)
    with _lock:
        _cp_cache[key] = cp
    return cp


def sigma_of_lambda(lam, tol: float = DEFAULT_ROOT_TOL,
                    config: QuadratureConfig | None = None) -> float:
    """The ratio -x1/z in (0, 1), strictly increasing in lambda."""
    return critical_points(lam, tol, config).sigma_lambda


def sigma_lambda_table(config: QuadratureConfig | None = None):
    """The cached 41-point (lambda, sigma_lambda) bracketing table."""
    cfg = config if config is not None else DEFAULT_CONFIG
    with _lock:
        hit = _table_cache.get(cfg)
    if hit is not None:
        return hit
    # Bracket-grade accuracy is enough here; roots queried through the table
    # are refined at full tolerance afterwards.
    coarse = QuadratureConfig(
        abs_tol=max(cfg.abs_tol, 1e-10),
        split_point=cfg.split_point,
        tail_cutoff_sigmas=cfg.tail_cutoff_sigmas,
        max_subdivisions=cfg.max_subdivisions)
    lams = np.linspace(SUPPORTED_LAMBDA[0], SUPPORTED_LAMBDA[1], _TABLE_SIZE)
    sigs = np.array([critical_points(l, 1e-6, coarse).sigma_lambda for l in lams])
    if not np.all(np.diff(sigs) > 0.0):
        raise NonConvergent("sigma(lambda) table is not strictly increasing")
    entry = (lams, sigs)
    with _lock:
        _table_cache[cfg] = entry
    return entry


def lambda_of_sigma(sigma, tol: float = DEFAULT_ROOT_TOL,
                    config: QuadratureConfig | None = None) -> float:
    """The unique lambda with sigma(lambda) = sigma, for sigma in (0, 1).

    sigma = 1 is a limit, not attained, and is rejected.
    """
    sigma = float(getattr(sigma, "value", sigma))
    if not 0.0 < sigma < 1.0:
        raise InvalidParameter(f"sigma must lie in (0, 1) strictly, got {sigma}")
    _check_tol(tol)
    cfg = config if config is not None else DEFAULT_CONFIG
    key = (sigma, tol, cfg)
    with _lock:
        hit = _inverse_cache.get(key)
    if hit is not None:
        return hit
    _warn_outside(sigma, *SUPPORTED_SIGMA, name="sigma")
    lams, sigs = sigma_lambda_table(cfg)
    i = int(np.searchsorted(sigs, sigma))
    lo = float(lams[i - 1]) if i > 0 else 1e-4
    # above 0.4995 the weight exponent is so close to -1 that float64
    # quadrature cannot hold its guarantees; sigma(0.4995) is already > 0.998
    hi = float(lams[i]) if i < lams.size else 0.4995
    g = lambda u: sigma_of_lambda(u, tol, cfg) - sigma
    root = _bisect(g, lo, hi, tol, lo_positive=False, what="lambda(sigma)")
    with _lock:
        _inverse_cache[key] = root
    return root
