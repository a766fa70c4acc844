"""Exception types raised across the package."""


class InvalidLengthError(ValueError):
    pass


class InvalidCapacityError(ValueError):
    pass


class CapacityExceededError(ValueError):
    pass


class IncompatibleChromosomeError(ValueError):
    pass


class IncompatibleSchemaError(ValueError):
    pass


class DegenerateFitnessError(ArithmeticError):
    """Raised when a fitness-proportional computation has a zero denominator."""


class ConfigurationError(ValueError):
    """Invalid run configuration. ``field`` names the offending parameter."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
