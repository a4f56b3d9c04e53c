"""Exception types shared across the package."""


class OscbathError(Exception):
    """Base class for all package errors."""


class InvalidSpec(OscbathError):
    """Bath or system parameters violate their validity constraints."""


class OverCoupling(OscbathError):
    """A discretized bath implies an unphysically strong coupling at the cutoff."""


class NonPositiveMode(OscbathError):
    """A normal-mode frequency came out non-positive (degenerate input)."""


class CholeskyFailure(OscbathError):
    """The ground-state precision matrix is numerically non-positive-definite."""


class NegativeXiSq(OscbathError):
    """The effective Bohmian frequency squared is non-positive; the damped
    oscillatory solution does not apply to such a bath."""


class StepTooLarge(OscbathError):
    """Integrator time step too large for the fastest frequency present."""


class OverdampedUnsupported(OscbathError):
    """Closed-form damped solutions require friction strictly below critical."""


class DegenerateSignal(OscbathError):
    """Signal has no usable oscillation to fit."""


class NoConvergence(OscbathError):
    """Damped-sine refinement did not converge within the iteration budget.

    Carries the best iterate seen so far in ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class GridMismatch(OscbathError):
    """Two trajectories do not share a time grid."""


class ConfigError(OscbathError):
    """Configuration input is malformed or contains invalid values."""
