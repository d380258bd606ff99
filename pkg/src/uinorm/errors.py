"""Exception hierarchy shared by every module."""


class UinormError(Exception):
    """Base class for all package errors."""


class ShapeError(UinormError, ValueError):
    """Operand shapes are incompatible."""


class DomainError(UinormError, ValueError):
    """An argument lies outside the domain of the operation."""


class NotNormalError(DomainError):
    """Matrix failed the normality test."""

    def __init__(self, commutator_norm, bound):
        super().__init__(
            f"matrix is not normal: ||A*A - AA*|| = {commutator_norm:.3e} exceeds {bound:.3e}"
        )
        self.commutator_norm = commutator_norm
        self.bound = bound


class ContourError(DomainError):
    """Contour does not enclose the spectrum inside the unit disk."""


class PreconditionError(DomainError):
    """Structural precondition of a checker is violated."""


class SingularMatrixError(UinormError, ArithmeticError):
    """Elimination met a pivot below the singularity threshold."""


class ConvergenceError(UinormError, ArithmeticError):
    """Iterative eigensolver did not converge."""

    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} sweeps)")
        self.iterations = iterations


class AccuracyError(UinormError, ArithmeticError):
    """Quadrature did not settle under node doubling."""


class UsageError(UinormError, ValueError):
    """Invalid harness configuration."""
