"""Exception hierarchy.

Everything raised on purpose by this package derives from
:class:`RisSaturationError`, so callers (and the CLI) can tell numerical
failures apart from bad input.
"""


class RisSaturationError(Exception):
    """Base class for all package errors."""


class DomainError(RisSaturationError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedFamilyError(DomainError):
    """The requested operation is not defined for this PAS family."""


class NoDensityError(UnsupportedFamilyError):
    """The PAS family is defined through its correlations, not a density."""


class DivergentBoundError(DomainError):
    """A closed-form saturation bound is infinite for these parameters."""


class NumericalFailure(RisSaturationError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class QuadratureError(NumericalFailure):
    """Adaptive quadrature hit its panel cap.

    Attributes
    ----------
    lag : int or None
        Correlation lag whose integral failed to converge.
    """

    def __init__(self, message, lag=None):
        super().__init__(message)
        self.lag = lag


class InvalidCorrelationError(NumericalFailure):
    """A correlation sequence does not yield a positive semidefinite matrix."""


class ConfigError(RisSaturationError, ValueError):
    """Experiment configuration could not be parsed or validated.

    Attributes
    ----------
    line : int or None
        1-based line number in the config file, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
