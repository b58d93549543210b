"""
Exceptions raised by the pipeline stages. Every error derives from
`ChronoQAError`, so callers can catch the whole family at stage boundaries.
Errors describing bad input data additionally derive from `ValueError`.
"""

from typing import List, Optional, Sequence, Tuple


class ChronoQAError(Exception):
    """Base class of all library errors."""


class ConfigurationError(ChronoQAError):
    """Invalid configuration value or malformed dictionary file."""


class DataError(ChronoQAError, ValueError):
    """Malformed data file. Collects all issues found as
    ``(line_number, message)`` pairs so they can be reported at once."""

    def __init__(self, source: str, issues: Sequence[Tuple[int, str]]):
        self.source = source
        self.issues: List[Tuple[int, str]] = list(issues)
        lines = [f"{source}:{line}: {message}"
                 for line, message in self.issues]
        super().__init__("\n".join(lines))


class UnnormalizableExpression(ChronoQAError, ValueError):
    """Temporal expression without an anchor (durations, sets)."""


class EmptyConstraint(ChronoQAError):
    """No tokens follow the signal word."""


class UnmappedSignal(ChronoQAError):
    """Signal word missing from the signal dictionary."""


class NoEntityResolved(ChronoQAError):
    """Sub-question mentions no known KB entity."""


class NoPredicateMatched(ChronoQAError):
    """No predicate of the question entities matches the question."""


class NoScopeFound(ChronoQAError):
    """Candidate answer without any time scope in the KB."""


class EmptyTemporalResult(ChronoQAError):
    """Temporal sub-question returned no dates."""


class UnscopedCandidate(ChronoQAError):
    """Candidate cannot be ordered because it has no time scope."""


class DegenerateInterval(ChronoQAError, ValueError):
    """Allen relations need closed intervals with begin < end."""


class EvaluationError(ChronoQAError, ValueError):
    """Predictions do not line up with the benchmark items."""


class BackendError(ChronoQAError):
    """External backend process failed or broke the line protocol."""

    def __init__(self, message: str, stderr: Optional[str] = None):
        self.stderr = stderr
        super().__init__(message)
