"""Exception types raised across the package."""


class HolexError(Exception):
    """Base class for all package errors."""


class DimensionError(HolexError, ValueError):
    """Vector lengths do not agree."""


class SymmetryError(HolexError, ValueError):
    """A spectrum is not conjugate symmetric (no real pre-image)."""


class DivergenceError(HolexError, RuntimeError):
    """Training produced non-finite parameters."""

    def __init__(self, epoch, message=None):
        self.epoch = epoch
        super().__init__(message or f"non-finite parameters after epoch {epoch}")


class InconclusiveError(HolexError, ValueError):
    """Every probe score was too close to zero to form a ratio."""


class DataError(HolexError, ValueError):
    """Malformed or empty triple data."""


class CorruptFileError(HolexError, ValueError):
    """A model file could not be decoded."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
