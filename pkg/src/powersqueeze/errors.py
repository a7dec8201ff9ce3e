"""Exceptions shared across the package."""

from __future__ import annotations


class NumericsError(RuntimeError):
    """Hard numerical failure (cross-check mismatch, lost bracket, no convergence).

    Messages start with "<module>.<operation>:" so batch callers can report
    the failing stage.
    """


class QuadratureError(NumericsError):
    """Panel refinement hit its cap; carries the last two estimates."""

    def __init__(self, message: str, last_estimates: tuple[float, float]):
        super().__init__(message)
        self.last_estimates = last_estimates


class JacobiRecoveryError(NumericsError):
    """Hankel factorization terminated early.

    order is the size of the largest Jacobi block that was fully recovered;
    offdiag/diag hold the coefficients obtained before termination.
    """

    def __init__(self, message: str, order: int, offdiag, diag):
        super().__init__(message)
        self.order = order
        self.offdiag = offdiag
        self.diag = diag
