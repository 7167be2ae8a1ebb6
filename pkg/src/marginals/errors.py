"""Exception hierarchy. The CLI maps each class onto an exit code."""


class MarginalsError(Exception):
    exit_code = 1


class InstanceTooLarge(MarginalsError):
    """A configured size cap was exceeded."""

    exit_code = 2

    def __init__(self, cap: str, value: int, limit: int):
        self.cap = cap
        self.value = value
        self.limit = limit
        super().__init__(f"instance too large: {cap} would be {value}, cap is {limit}")


class WrongDimension(MarginalsError):
    exit_code = 3


class InvalidInput(MarginalsError, ValueError):
    exit_code = 4


class NotLocallyInvariant(InvalidInput):
    def __init__(self, message: str, constraint=None):
        self.constraint = constraint
        super().__init__(message)


class NotPrimitive(InvalidInput):
    pass


class Unbounded(InvalidInput):
    pass


class VerificationFailure(MarginalsError):
    exit_code = 5


class DegreeTooHigh(MarginalsError):
    exit_code = 5
