"""Exception types shared across the package."""

from __future__ import annotations


class KspanError(Exception):
    """Base class for all package errors."""


class NotFound(KspanError):
    """Generation retries exhausted without producing a valid instance."""


class NoFan(KspanError):
    """Requested fan does not exist (flow value below k)."""


class NoLinkage(KspanError):
    """Requested disjoint path system does not exist (flow value below k)."""


class DegreeTooLow(KspanError):
    """Input graph violates the minimum-degree precondition."""


class MatchingDeficit(KspanError):
    """A maximum matching fell short of its guaranteed size."""


class Stuck(KspanError):
    """A greedy walk ran out of moves; signals a broken invariant upstream."""


class TooSmall(KspanError):
    """Input has fewer vertices than the operation requires."""


class NotKConnected(KspanError):
    """Input failed strong k-connectivity validation."""

    def __init__(self, message: str, witness: frozenset[int] | None = None):
        super().__init__(message)
        self.witness = witness


class NotStronglyConnected(KspanError):
    """Input digraph is not strongly connected."""


class InternalInvariant(KspanError):
    """A construction-time invariant failed; indicates a bug, never expected."""
