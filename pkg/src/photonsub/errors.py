"""Exception hierarchy. Each branch maps to a distinct CLI exit code."""


class PhotonsubError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(PhotonsubError):
    """Invalid or inconsistent configuration input."""

    exit_code = 2


class PhysicsError(PhotonsubError):
    """Parameter combination outside the model's physical domain."""

    exit_code = 3


class PumpDomainError(PhysicsError):
    """Pump ratio outside the below-threshold domain."""


class UnphysicalLossError(PhysicsError):
    """Loss model evaluates to a transmittance outside [0, 1]."""


class DegenerateParameterError(PhysicsError):
    """Parameters make the conditional state undefined (no heralding)."""


class UnphysicalDensityError(PhysicsError):
    """A probability density came out negative beyond tolerance."""


class GridError(PhysicsError):
    """Time grid too coarse, too short, or mismatched between operands."""


class KernelError(PhysicsError):
    """Correlation kernel violates Hermiticity or positivity."""


class ConvergenceError(PhotonsubError):
    """An iterative procedure failed to converge or became inefficient."""

    exit_code = 4


class SamplerEfficiencyError(ConvergenceError):
    """Rejection sampler acceptance rate fell below the usable floor."""
