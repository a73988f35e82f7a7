"""Exception types shared across modules.

Every error carries a machine-readable ``code`` drawn from a closed set so
the HTTP layer and the CLI can map failures uniformly.
"""

from __future__ import annotations


class SentbankError(Exception):
    """Base class; ``code`` is one of the documented API error codes."""

    code = "internal"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class NotFoundError(SentbankError):
    code = "not_found"


class UnknownScopeError(NotFoundError):
    """A sourceTag or document id that matches nothing in the store."""


class AlreadyIngestedError(SentbankError):
    """Re-ingestion of an existing (sourceTag, name) pair without opt-in."""

    code = "already_ingested"


class ValidationFailedError(SentbankError):
    code = "validation_failed"


class UnsupportedLanguagePairError(ValidationFailedError):
    """Raised with the supported pairs listed in ``details``."""

    def __init__(self, source: str, target: str, supported: list[tuple[str, str]]):
        pairs = [f"{a}->{b}" for a, b in supported]
        super().__init__(
            f"unsupported language pair {source}->{target}",
            details={"supportedPairs": pairs},
        )


class UnsupportedMediaError(SentbankError):
    code = "unsupported_media"


class DegenerateFitError(SentbankError):
    """Fewer than two points, or no spread in x: no trend can be fitted."""

    code = "degenerate_fit"


class NonInvertibleTrendError(SentbankError):
    """Trend slope is not positive; required volume has no solution."""

    code = "non_invertible_trend"
