"""Exception types shared across the package."""


class DualDelayError(Exception):
    """Base class for all package errors."""


class DomainError(DualDelayError):
    """An input lies outside the mathematical domain of an operation."""


class UnstableQueue(DualDelayError):
    """Queue utilization rho = lambda_a * delta_adv is >= 1."""


class NoRootInUnitInterval(DualDelayError):
    """The boundary function has no sign change on (0, 1)."""


class AllocationError(DualDelayError):
    """A power-allocation vector is invalid (negative entry or sum > 1)."""


class ConfigError(DualDelayError):
    """A run configuration is malformed (unknown key, missing value, bad type)."""
