"""Exception hierarchy shared by all modules.

``DomainError`` subclasses describe mathematically meaningful failures (a
point outside the elliptic set, a zero of C, ...).  The CLI maps them to exit
status 2; everything else is treated as an input or I/O problem.
"""

from __future__ import annotations


class WvnError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(WvnError, ValueError):
    pass


class NonPositiveOffDiagonal(InvalidInput):
    pass


class ExactUnavailable(WvnError):
    """Operation needs the rational mirrors of the operator entries."""


class PoleAtPoint(WvnError, ZeroDivisionError):
    pass


class InternalInconsistency(WvnError, AssertionError):
    pass


class DomainError(WvnError):
    pass


class NotElliptic(DomainError):
    pass


class DegenerateNormalization(DomainError):
    pass


class NothingToSplit(DomainError):
    pass


class SplitSearchFailed(DomainError):
    pass


class EmbeddingObstruction(DomainError):
    pass


class TailBudgetExceeded(DomainError):
    pass


class DegenerateStart(DomainError):
    pass


class UnsupportedDiagonal(DomainError):
    pass
