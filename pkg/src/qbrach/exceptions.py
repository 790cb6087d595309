"""Exception hierarchy for qbrach."""


class QbrachError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QbrachError, ValueError):
    """Operands live in Hilbert spaces of different dimension."""


class NotHermitianError(QbrachError, ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class ConvergenceError(QbrachError, RuntimeError):
    """An iterative routine failed to converge."""


class NormalizationError(QbrachError, ValueError):
    """A state vector is not unit norm (or has zero norm)."""


class DegeneratePairError(QbrachError, ValueError):
    """Initial and final states lie on the same ray; the transit time is zero."""


class AxisError(QbrachError, ValueError):
    """Rotation-axis states are not orthogonal or eigenvalues coincide."""


class DomainError(QbrachError, ValueError):
    """An argument lies outside the domain of a formula."""
