"""Exception types shared across the package."""


class DistembedError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(DistembedError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedOrderError(DistembedError):
    """A derivative order exceeds the kernel's declared smoothness."""


class NumericalInconsistencyError(DistembedError):
    """A quantity that must be real/nonnegative came out wrong beyond roundoff.

    Signals a kernel implementation bug rather than user error.
    """


class QuadratureBudgetError(DistembedError):
    """Adaptive quadrature exceeded its evaluation budget before converging."""


class UnsupportedConfigurationError(DistembedError):
    """The inputs are valid but outside the configurations the operation defines."""


class SchemaError(DistembedError, ValueError):
    """A JSON document does not match the documented schema."""
