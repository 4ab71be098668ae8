"""Exception types shared across the package."""


class EmpiricaError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(EmpiricaError):
    """Invalid or malformed experiment configuration."""


class EmptySampleError(EmpiricaError):
    """An operation was given an empty sample."""


class EmptyRunError(EmpiricaError):
    """An experiment was configured with zero replications."""


class CaseUndefinedError(EmpiricaError):
    """The closed-form characteristic function does not cover (tau, t, n)."""


class NonConvergedError(EmpiricaError):
    """Numeric one-sided derivative quotients failed to stabilise."""


class FactorizationError(EmpiricaError):
    """Covariance matrix is indefinite beyond the repair tolerance."""


class NumericHealthError(EmpiricaError):
    """Two internal evaluation routes disagreed beyond the safety bound."""
