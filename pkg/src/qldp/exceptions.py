"""Exception types shared across the package.

All inherit from ValueError so callers that only care about "bad input"
can catch one base class.
"""


class QldpError(ValueError):
    """Base class for all package-specific errors."""


class InvalidDimensionError(QldpError):
    """Hilbert-space dimension is not an integer >= 2."""


class UnsupportedDimensionError(QldpError):
    """Operation only defined for qubits (d=2) was called with d != 2."""


class NotAStateError(QldpError):
    """A candidate density matrix has a negative eigenvalue."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class InvalidInputError(QldpError):
    """Malformed input (non-Hermitian matrix, shape mismatch, ...)."""


class InvalidBudgetError(QldpError):
    """Privacy budget eps is negative."""


class OutOfRegimeError(QldpError):
    """Requested bound outside its regime of validity (e.g. the
    small-budget bounds with eps >= 1)."""


class DivergedError(QldpError):
    """A quantity is unbounded or a search failed to bracket a root."""


class NearSingularError(QldpError):
    """The qudit information matrix M(w) is numerically singular."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class RankDeficientError(QldpError):
    """SLD measurement requested at a rank-deficient operating state."""


class InvalidBiasError(QldpError):
    """Bias bound b outside [0, 1)."""
