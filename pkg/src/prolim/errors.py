"""Exception types shared across the package."""


class ProlimError(Exception):
    """Base class for package-specific errors."""


class FieldMismatchError(ProlimError):
    """Operands belong to different scalar domains."""


class NotAFieldError(ProlimError):
    """Operation needs a field but was given the integer ring."""


class InexactDivisionError(ProlimError):
    """Integer division with a nonzero remainder."""


class ShapeError(ProlimError):
    """Matrix or vector dimensions do not line up."""


class SizeCapError(ProlimError):
    """A dense materialization would exceed the configured entry cap."""


class LevelProviderError(ProlimError):
    """A tower's level provider could not produce a requested level."""


class SquareCommutationError(ProlimError):
    """A commuting-square check failed at the attached level pair."""

    def __init__(self, pair, message=""):
        self.pair = pair
        super().__init__(message or f"square check failed at levels {pair}")


class NotInImageError(ProlimError):
    """A target vector fails per-level solvability at the attached level."""

    def __init__(self, level, message=""):
        self.level = level
        super().__init__(message or f"not solvable at level {level}")


class UnstabilizedError(ProlimError):
    """Stabilization was not confirmed for the attached level."""

    def __init__(self, level, message=""):
        self.level = level
        super().__init__(message or f"stabilization unconfirmed at level {level}")


class DepthInsufficientError(ProlimError):
    """Explored depth is too small to complete the computation."""


class CertificateError(ProlimError):
    """A produced certificate failed its own exact checks (internal bug)."""


class DocumentError(ProlimError):
    """A problem document failed validation; `path` names the offender."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
