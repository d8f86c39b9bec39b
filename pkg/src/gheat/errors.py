"""Exception types shared across the package."""


class GHeatError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(GHeatError, ValueError):
    """A parameter lies outside its documented domain."""


class NonConvergent(GHeatError, RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ConsistencyFailure(GHeatError, RuntimeError):
    """Two independent evaluation routes disagree beyond tolerance."""


class BracketFailure(GHeatError, RuntimeError):
    """A root bracket does not show the guaranteed sign change."""


class ScanExhausted(GHeatError, RuntimeError):
    """A bracket scan hit its hard upper limit without a sign change."""


class RangeError(GHeatError, ValueError):
    """The requested (lambda, sigma) pair admits no positive solution."""


class UnstableDetected(GHeatError, RuntimeError):
    """A finite-difference solve produced non-finite values."""


class InvalidGrid(GHeatError, ValueError):
    """A grid specification violates its invariants."""


class QuadratureFailure(GHeatError, RuntimeError):
    """A fixed-rule quadrature failed its node-doubling convergence check."""


class DegenerateInterval(GHeatError, ValueError):
    """An interval is too narrow for the requested ramp width."""


class FitDegenerate(GHeatError, RuntimeError):
    """Capacity estimates are too noisy to support an order fit."""


class RangeWarning(UserWarning):
    """Parameters are outside the range with accuracy guarantees."""
