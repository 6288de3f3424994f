"""Exception hierarchy. Every domain failure derives from ``CommonPairsError``."""


class CommonPairsError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class GraphError(CommonPairsError):
    pass


class KernelError(CommonPairsError):
    pass


class PreconditionError(CommonPairsError):
    """A witness construction was requested outside its guaranteed regime."""


class ParseError(CommonPairsError):
    """Malformed input; ``location`` names the offending field."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class OrderingError(CommonPairsError):
    pass
