"""Exception types shared across the package."""


class LqcError(Exception):
    """Base class for all package-specific errors."""


class UnobservableStateError(LqcError):
    """Raised when a state has no weight in the observable subspace."""


class PostselectionFailedError(LqcError):
    """Raised when the marked branch of a postselection is empty."""


class NoDominantSolutionError(LqcError):
    """Raised when the interval-halving search finds no dominant output."""


class FormatError(LqcError, ValueError):
    """Malformed input file or JSON document.

    ``location`` carries a line number (text formats) or a field path
    (JSON documents) for diagnostics.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
