"""Exception hierarchy for the diffusion engine."""


class ParameterDomainError(ValueError):
    """Raised when a parameter lies outside its admissible domain."""
    pass


class IndexDomainError(IndexError):
    """Raised when a node or layer index is out of range."""
    pass


class ShapeError(ValueError):
    """Raised when per-layer inputs disagree on the number of layers."""
    pass


class NetworkFormatError(ValueError):
    """Raised when edge-list text cannot be parsed into a valid network."""

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ResultsIOError(OSError):
    """Raised when results cannot be written to their destination."""

    def __init__(self, path, reason: str):
        self.path = str(path)
        super().__init__(f"cannot write '{self.path}': {reason}")
