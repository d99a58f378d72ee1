"""Exception types shared across the package."""

from __future__ import annotations

from typing import Iterable


class QmcheckError(Exception):
    """Base class for every error raised by this package."""


class FormulaSyntaxError(QmcheckError):
    """Formula text could not be parsed.

    Carries the byte offset of the offending token and, when the parser
    knows them, the tokens that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f"syntax error at offset {offset}: {message}"
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class UnsupportedBoundError(FormulaSyntaxError):
    """A probability bound operator outside the supported set {>=, <}."""

    def __init__(self, op: str, offset: int):
        super().__init__(
            f"unsupported probability bound {op!r}; only '>=' and '<' are "
            "defined (see README, 'Probability bounds')",
            offset,
        )


class ModelFormatError(QmcheckError):
    """A model document violated the text format; one diagnostic per issue."""

    def __init__(self, diagnostics: Iterable[str]):
        self.diagnostics = tuple(diagnostics)
        super().__init__("\n".join(self.diagnostics))


class InvalidModelError(QmcheckError):
    """A structurally parseable model failed validation."""

    def __init__(self, violations: Iterable[str]):
        self.violations = tuple(violations)
        super().__init__("invalid model:\n" + "\n".join(self.violations))


class EvaluationError(QmcheckError):
    """A formula cannot be evaluated against the given model or config."""


class ConvergenceError(QmcheckError):
    """The linear-system solver failed to reach its residual tolerance."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"reachability solver did not converge after {iterations} "
            f"iterations (residual {residual:.3e})"
        )


class HorizonError(QmcheckError):
    """Path enumeration left too much probability mass undecided."""

    def __init__(self, undecided: float, horizon: int):
        self.undecided = undecided
        self.horizon = horizon
        super().__init__(
            f"undecided path mass {undecided:.3e} at horizon {horizon} "
            "exceeds tolerance; raise the horizon"
        )


class PathUndecided(QmcheckError):
    """A finite path prefix is too short to decide the path formula."""
