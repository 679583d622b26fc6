"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: bad files, out-of-range parameters, non-metric data."""


class ResourceGuardError(RuntimeError):
    """A computation would exceed the configured size budget.

    ``count`` holds the number of items enumerated before the guard tripped.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count
