"""Exception types shared across the package."""


class FFBError(Exception):
    """Base class for all library errors."""


class SizeLimitError(FFBError, ValueError):
    """An enumeration or basis would exceed its configured cap."""

    def __init__(self, what, requested, cap):
        self.requested = requested
        self.cap = cap
        super().__init__(f"{what}: requested {requested} exceeds cap {cap}")


class DomainError(FFBError, ValueError):
    """An argument is well formed but outside the operation's domain."""


class MissingMomentError(DomainError, KeyError):
    """A moment or cumulant oracle has no value for a required word."""

    def __init__(self, word):
        self.word = word
        super().__init__(f"no value for word {word}")

    def __str__(self):
        return self.args[0]


class TruncationError(FFBError, ValueError):
    """A Fock computation would leave the truncated space."""
