"""Exceptions shared across the package."""


class EvaluationError(RuntimeError):
    """An integrand evaluator returned non-finite or mis-shaped values."""


class ConvergenceError(RuntimeError):
    """An iterative solve hit its iteration cap before reaching tolerance."""
