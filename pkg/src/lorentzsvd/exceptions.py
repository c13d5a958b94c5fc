"""Exception hierarchy shared by the whole package."""


class LorentzSVDError(Exception):
    """Base class for all errors raised by lorentzsvd."""


class ValidationError(LorentzSVDError, ValueError):
    """Input does not satisfy the invariants of its domain type."""


class NotAStateError(ValidationError):
    """A matrix that should be a density operator is not positive semidefinite."""


class RankError(ValidationError):
    """A state has higher rank than the operation supports."""


class ClassError(LorentzSVDError):
    """A three-qubit state belongs to the wrong SLOCC class for the operation."""


class NormalFormObstruction(LorentzSVDError):
    """The state has no Bell-diagonal normal form (non-diagonalizable class)."""


class InternalInconsistency(LorentzSVDError, RuntimeError):
    """A numerical decomposition produced a result violating its own contract."""


class SingularMarginalError(LorentzSVDError):
    """A local marginal is singular, so it cannot be whitened by a finite filter."""
