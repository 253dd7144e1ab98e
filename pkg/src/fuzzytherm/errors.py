"""Exception types shared across the toolkit."""

from __future__ import annotations


class FuzzyThermError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(FuzzyThermError, ValueError):
    """A runtime input is unusable: non-finite, missing, or empty."""


class DegenerateOutputError(FuzzyThermError):
    """Every rule weight is zero, so no crisp output can be formed.

    The library never fabricates a fallback value; callers decide what a
    safe actuation is when this happens.
    """


class InternalConsistencyError(FuzzyThermError):
    """A bound rule referenced a variable or term missing from its context."""


class RuleSyntaxError(FuzzyThermError):
    """The rule text violates the grammar. Carries a 1-based position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class BindError(FuzzyThermError):
    """A rule references names that do not exist in the vocabulary."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None and col is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class UnknownVariableError(BindError):
    """An atom or consequent names a variable the vocabulary lacks."""


class UnknownTermError(BindError):
    """An atom or consequent names a term its variable lacks."""


class ConsequentVariableError(BindError):
    """A rule's THEN part names an input variable instead of the output."""


class InvalidStepError(FuzzyThermError):
    """The integration step exceeds the explicit-Euler stability bound."""


class NoEquilibriumError(FuzzyThermError):
    """The plant has no finite equilibrium (zero total loss coefficient)."""


class ConfigError(FuzzyThermError):
    """A configuration document failed validation.

    ``details`` lists ``{"path": ..., "message": ...}`` entries so callers
    can report field-level problems.
    """

    def __init__(self, details: list[dict[str, str]] | str, path: str = ""):
        if isinstance(details, str):
            details = [{"path": path, "message": details}]
        self.details = details
        lines = "; ".join(f"{d['path']}: {d['message']}" if d["path"] else d["message"] for d in details)
        super().__init__(lines)
