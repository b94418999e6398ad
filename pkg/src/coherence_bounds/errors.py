"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`CoherenceError`; the CLI maps subclasses onto exit codes.
"""


class CoherenceError(Exception):
    """Base class for all package errors."""


class ValidationError(CoherenceError, ValueError):
    """Input fails a structural or numeric precondition."""


class NotAStateError(ValidationError):
    """Matrix is not a valid density matrix (negative eigenvalue, bad trace)."""


class SupportError(ValidationError):
    """Support of the first state is not contained in that of the second."""


class BranchError(ValidationError):
    """(alpha, beta) fall outside the parameter domain the caller asked for."""


class CertificationError(ValidationError):
    """A frame or ensemble failed certification where it was required."""


class FrameFileError(ValidationError):
    """Frame JSON file violates the schema."""


class ConsistencyError(CoherenceError, ArithmeticError):
    """An internally derived quantity left its provable range."""


class ClosedFormMismatch(ConsistencyError):
    """A hand-derived closed form disagrees with the generic engine."""


class InequalityViolation(CoherenceError):
    """A lower bound exceeded the quantity it bounds beyond tolerance."""
