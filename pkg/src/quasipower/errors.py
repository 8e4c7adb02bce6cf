"""Exception hierarchy shared across the package."""


class QuasiPowerError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QuasiPowerError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class UnsupportedDimensionError(QuasiPowerError, ValueError):
    pass


class DegenerateCovarianceError(QuasiPowerError, ValueError):
    """The limiting covariance matrix is singular.

    No uniform rate exists in this case; see ``quasipower.models.rademacher_demo``.
    """


class NumericError(QuasiPowerError, ArithmeticError):
    pass


class ResourceLimitError(QuasiPowerError, MemoryError):
    pass


class UnsupportedGrammarError(QuasiPowerError, ValueError):
    pass


class ConfigurationError(QuasiPowerError, ValueError):
    pass
