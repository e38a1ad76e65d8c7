"""Truncated dense solvers for the small collocation systems.

The Levin collocation matrices D + i diag(g') are small (k x k with k around
7-13) but become numerically rank-deficient wherever g' passes through zero,
so plain LU is out.  The workhorse is a truncated SVD: drop every singular
value below an absolute threshold and return the minimum-norm solution over
the kept subspace.  A rank-revealing QR variant trades a little robustness
for speed, and a diagonal fixed-point iteration handles the strongly
oscillatory regime where D + i diag(g') is dominated by its diagonal.

All three delegate the numeric core to the active kernel backend
(see `_kernels`); this module owns validation, the result type, and the
debug-build norm assertions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError


@dataclass(frozen=True)
class TruncatedSolve:
    """Result of a truncated solve of A x ~ b.

    Attributes
    ----------
    solution : ndarray
        Complex solution vector; zero when rank is 0.
    rank : int
        Number of singular values (or R diagonal entries) kept.
    sigma_max : float
        Largest singular value, or |R_11| for the QR variant.
    sigma_min_kept : float
        Smallest kept singular value (0.0 when rank is 0).
    residual_norm : float
        Euclidean norm of A @ solution - b.
    """

    solution: np.ndarray
    rank: int
    sigma_max: float
    sigma_min_kept: float
    residual_norm: float


@dataclass(frozen=True)
class SolveConfig:
    """Solver selection shared by the Levin integrators.

    ``threshold_rel`` is the relative truncation threshold (the dense solves
    truncate at threshold_rel times the matrix two-norm); integrators that
    compute their own relative threshold pass it explicitly and ignore this
    field.  The fixed-point iteration is only attempted when
    ``iteration_enabled`` and falls back to the dense method whenever its
    diagonal-dominance gate fails.
    """

    method: str = "svd"
    threshold_rel: float = 5e-13
    iteration_enabled: bool = False
    iteration_tol: float = 1e-15
    iteration_max: int = 400

    def __post_init__(self) -> None:
        if self.method not in ("svd", "rrqr"):
            raise ValueError(f"method must be 'svd' or 'rrqr', got {self.method!r}")
        if not self.threshold_rel > 0:
            raise ValueError("threshold_rel must be positive")
        if not self.iteration_tol > 0 or self.iteration_max < 1:
            raise ValueError("bad iteration parameters")

    @property
    def method_code(self) -> int:
        return _kernels.METHOD_RRQR if self.method == "rrqr" else _kernels.METHOD_SVD


def _checked_system(A, b, threshold_abs):
    A = np.ascontiguousarray(A, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}")
    if not threshold_abs >= 0:
        raise ValueError(f"threshold must be nonnegative, got {threshold_abs}")
    if not (np.isfinite(A).all() and np.isfinite(b).all()):
        raise ValueError("non-finite entries in A or b")
    return A, b


def two_norm(A) -> float:
    """Largest singular value of A."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    return float(np.linalg.svd(A, compute_uv=False)[0])


def _norm_assert(res: TruncatedSolve, b: np.ndarray, threshold_abs: float) -> TruncatedSolve:
    # Minimum-norm bound ||x|| <= ||b|| / max(threshold, sigma_min_kept);
    # slack covers accumulation round-off.  Compiled out under -O.
    if res.rank > 0:
        bound = np.linalg.norm(b) / max(threshold_abs, res.sigma_min_kept)
        assert np.linalg.norm(res.solution) <= bound * (1 + 1e-10), (
            f"solution norm {np.linalg.norm(res.solution):.3e} exceeds bound {bound:.3e}"
        )
    return res


def tsvd_solve(A, b, threshold_abs: float) -> TruncatedSolve:
    """Minimum-norm truncated-SVD solve of A x ~ b.

    Keeps the singular values at or above ``threshold_abs`` and inverts A on
    their span only; rank 0 yields the zero solution.  The returned solution
    scales exactly with b for power-of-two scalings (the kept rank depends on
    A and the threshold alone).
    """
    A, b = _checked_system(A, b, threshold_abs)
    x, rank, smax, smin, resid = _kernels.active().tsvd(A, b, float(threshold_abs))
    return _norm_assert(
        TruncatedSolve(x, int(rank), float(smax), float(smin), float(resid)), b, threshold_abs
    )


def rrqr_solve(A, b, threshold_abs: float) -> TruncatedSolve:
    """Truncated solve via column-pivoted Householder QR.

    The rank cut keeps the prefix of R diagonal entries with modulus at or
    above ``threshold_abs`` (the moduli are nonincreasing under
    max-column-norm pivoting).  Cheaper than `tsvd_solve`; sigma fields hold
    the R diagonal quantities in place of singular values.
    """
    A, b = _checked_system(A, b, threshold_abs)
    x, rank, rmax, rmin, resid = _kernels.active().rrqr(A, b, float(threshold_abs))
    return TruncatedSolve(x, int(rank), float(rmax), float(rmin), float(resid))


def diag_iteration_solve(D, gdiag, b, tol: float = 1e-15, max_iter: int = 400):
    """Fixed-point solve of (D + diag(gdiag)) p = b when the diagonal dominates.

    Iterates p <- G^{-1} (b - D p) from p = 0, stopping when the sup-norm
    update falls below ``tol * ||b||_inf``.

    Returns
    -------
    ndarray or None
        The solution, or None when the contraction gate
        ||G^{-1}||_inf ||D||_inf <= 1/2 fails (caller should use a dense
        solver instead).

    Raises
    ------
    ConvergenceError
        If the gate passes but ``max_iter`` sweeps do not reach tolerance.
    """
    D = np.ascontiguousarray(D, dtype=np.float64)
    gdiag = np.ascontiguousarray(gdiag, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if D.ndim != 2 or D.shape[0] != D.shape[1] or gdiag.shape != b.shape or b.shape[0] != D.shape[0]:
        raise ValueError(f"shape mismatch: D {D.shape}, gdiag {gdiag.shape}, b {b.shape}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    p, status, _ = _kernels.active().diag_iter(D, gdiag, b, float(tol), int(max_iter))
    if status == 1:
        return None
    if status == 2:
        raise ConvergenceError(f"diagonal iteration did not converge in {max_iter} sweeps")
    return p
