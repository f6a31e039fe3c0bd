"""Exception types shared across the package."""

from __future__ import annotations


class StarlightError(Exception):
    """Base class for all package errors."""


class InvalidStar(StarlightError, ValueError):
    """A block violates the star invariants (size, distinctness, id range)."""


class NotABijection(StarlightError, ValueError):
    """A relabelling map is not a bijection on the vertex set."""


class InadmissibleOrder(StarlightError, ValueError):
    """The requested order cannot carry an e-star system, or is unreachable."""


class UnsupportedCase(StarlightError):
    """A construction step cannot be instantiated for these class sizes."""


class PreconditionError(StarlightError, ValueError):
    """A construction input does not satisfy its stated preconditions."""


class InfeasibleRequest(StarlightError, ValueError):
    """A subset-partition size vector cannot be realised."""


class SearchExhausted(StarlightError):
    """The exact-cover fallback ran out of its node budget."""


class ConstructionError(StarlightError, AssertionError):
    """A construction failed its own exit verification. Always a bug."""


class FormatError(StarlightError, ValueError):
    """A system, colouring or partition file could not be parsed."""
