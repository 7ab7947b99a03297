"""Exception hierarchy shared across the solver."""


class StrSolveError(Exception):
    """Base class for all errors raised by this package."""


class SyntaxParseError(StrSolveError):
    """Malformed input text (regex or SMT-LIB). Carries a position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class UnsupportedError(StrSolveError):
    """Input uses a feature outside the supported fragment."""

    def __init__(self, feature: str, pos: int = -1):
        detail = f"unsupported: {feature}"
        if pos >= 0:
            detail += f" (at offset {pos})"
        super().__init__(detail)
        self.feature = feature
        self.pos = pos


class ResourceLimitError(StrSolveError):
    """A configured budget was exceeded (size caps, transition budget, timeout)."""
