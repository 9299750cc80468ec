"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where an operation is defined."""


class PrecisionShortfall(ArithmeticError):
    """The requested precision cannot be reached with the current dials."""

    def __init__(self, message: str, needed=None, available=None):
        super().__init__(message)
        self.needed = needed
        self.available = available


class IndeterminateError(ArithmeticError):
    """A quantity is indistinguishable from zero at working precision."""


class ConvergenceError(ArithmeticError):
    """An infinite product or series did not stabilise within its cutoff."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigMismatch(ValueError):
    """Two elements built over different algebra configurations were combined."""


class SchemaError(ValueError):
    """A serialized document does not match a supported schema."""
