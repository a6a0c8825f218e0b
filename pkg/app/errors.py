"""
Exception hierarchy shared by all services.

The CLI layer maps these onto exit codes: parse errors 2, non-stabilization 3,
verification and internal failures 4.
"""

from typing import Any, Optional


class LocalSmithError(Exception):
    """Base class for every error raised by local-smith."""


class InputParseError(LocalSmithError, ValueError):
    """Malformed input document or unparseable entry."""


class ShapeMismatchError(LocalSmithError, ValueError):
    """Operands with incompatible matrix or series shapes."""


class BackendMismatchError(LocalSmithError, ValueError):
    """Operands living over different scalar backends."""


class InsufficientOrderError(LocalSmithError, ValueError):
    """A truncated jet or recursion does not carry the requested coefficient."""


class NotInvertibleError(LocalSmithError, ValueError):
    """Singular constant term, or subspaces that do not form a direct sum."""


class ContainmentError(LocalSmithError, ValueError):
    """A subspace expected to lie inside another one does not."""


class NotASolutionError(LocalSmithError, ValueError):
    """A curve offered as a solution (or approximation) has a nonzero residual too early."""


class SamplePointError(LocalSmithError, ValueError):
    """An auxiliary denominator vanishes at the requested sample point."""


class NonStabilizationError(LocalSmithError, RuntimeError):
    """The recursion hit k_max before stabilization could be certified."""

    def __init__(self, message: str, partial_state: Any = None):
        super().__init__(message)
        self.partial_state = partial_state


class InternalConsistencyError(LocalSmithError, RuntimeError):
    """A structural invariant failed; indicates a bug rather than bad input."""


class VerificationError(LocalSmithError, RuntimeError):
    """A named identity check failed."""

    def __init__(self, check: str, message: str, first_failure: Optional[int] = None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.first_failure = first_failure
