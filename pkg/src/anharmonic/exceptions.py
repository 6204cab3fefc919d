"""Exception hierarchy shared by all modules."""


class AnharmonicError(Exception):
    """Base class for library errors."""


class DomainError(AnharmonicError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ParameterError(AnharmonicError, ValueError):
    """Inconsistent or unsupported parameter combination."""


class BuildError(AnharmonicError, ValueError):
    """Operator construction rejected (e.g. failed ellipticity check)."""


class NumericError(AnharmonicError, RuntimeError):
    """Numerical procedure failed to reach its stated tolerance."""


class IntegrationError(NumericError):
    """Adaptive ODE integration broke down (step-size collapse etc.)."""


class PositivityError(NumericError):
    """Spectrum of an operator assumed positive was not positive."""


class ResolutionError(NumericError):
    """Grid or mode count insufficient for the requested tolerance."""


class DiagnosticError(AnharmonicError, RuntimeError):
    """A diagnostic fit lacks the dynamic range or sample count it needs."""


class ConfigError(AnharmonicError, ValueError):
    """Experiment configuration invalid (CLI exit code 2)."""
