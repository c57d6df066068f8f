"""Exception hierarchy.

Parameter and configuration problems derive from ``ParameterError`` (a
``ValueError``); failures of the numerics derive from ``NumericalError``.
The CLI maps the first family to exit code 2 and the second to exit code 3.
"""


class BrillSqueezeError(Exception):
    """Base class for all package errors."""


class ParameterError(BrillSqueezeError, ValueError):
    """Invalid or non-finite physical parameter."""


class InconsistentCouplingError(ParameterError):
    """A coupling cannot be realised from the given single-photon rate."""


class DomainError(ParameterError):
    """Argument outside the mathematical domain of a function."""


class ConfigError(ParameterError):
    """Malformed sweep configuration or unknown preset."""


class NumericalError(BrillSqueezeError, ArithmeticError):
    """A numerical routine failed or produced an untrustworthy result."""


class StabilityError(NumericalError):
    """The drift matrix has no stable steady state."""

    def __init__(self, message, spectral_abscissa=None):
        super().__init__(message)
        self.spectral_abscissa = spectral_abscissa


class StiffnessError(NumericalError):
    """Adaptive step size collapsed during time integration."""

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class HeatingRegimeError(NumericalError):
    """Anti-Stokes and Stokes spectral weights give a non-positive cooling rate."""


class InfeasibleError(NumericalError):
    """No stable parameter point inside the search bounds."""
