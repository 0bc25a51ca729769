"""Exception types shared across the toolkit."""


class RatApproxError(Exception):
    """Base class for all toolkit errors."""


class EvaluationDomainError(RatApproxError, ValueError):
    """An argument lies outside the documented validity region of an evaluator."""


class PoleError(RatApproxError, ArithmeticError):
    """Evaluation was requested at (or numerically at) a pole.

    The offending point is stored in ``point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class SymmetryError(RatApproxError, ValueError):
    """Conjugate closure is violated or cannot be enforced."""


class PartitionError(RatApproxError, ValueError):
    """Samples cannot be split into valid left/right interpolation sets."""


class PencilError(RatApproxError, ValueError):
    """A matrix pencil is structurally unusable (coincident points, identically singular)."""


class RankError(RatApproxError, ValueError):
    """Requested reduction order is incompatible with the numerical rank of the data."""


class InsufficientDataError(RatApproxError, ValueError):
    """Too few samples for the requested model order."""


class StagnationError(RatApproxError, RuntimeError):
    """An iterative fit ran out of usable data before reaching its tolerance."""


class DivergenceError(RatApproxError, RuntimeError):
    """An iterative fit produced unbounded iterates."""


class ComputationError(RatApproxError, RuntimeError):
    """A backend decomposition failed to converge; results would be unreliable."""
