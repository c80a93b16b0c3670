"""Exception hierarchy shared by every module."""


class OrienthamError(Exception):
    """Base class for all library errors."""


class InputError(OrienthamError, ValueError):
    """Malformed or out-of-range input."""


class ParameterError(InputError):
    """Parameters violate a stated precondition."""


class GenerationError(OrienthamError, RuntimeError):
    """A randomized generator ran out of attempts."""


class CapacityError(OrienthamError):
    """The instance is larger than the exhaustive method supports."""


class ClassificationError(OrienthamError):
    """A tuple matches none of the segment types."""


class ConstructionError(OrienthamError):
    """A greedy construction could not complete.

    ``step`` names the first condition that failed.
    """

    def __init__(self, message: str, step: str | None = None):
        super().__init__(message)
        self.step = step
