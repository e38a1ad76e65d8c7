"""Single-rectangle Levin estimates for bivariate oscillatory integrals.

The delaminating estimate solves the PDE p_x + i g_x p = f one Chebyshev
fiber at a time: on each horizontal line of the tensor grid the restriction
is an ODE whose collocation matrix is k x k, so the rectangle costs k tiny
truncated solves instead of one k^2 x k^2 system.  The integral then reduces
to two univariate oscillatory integrals along the left and right edges,

    int_rect f e^{i g} = int_c^d p(b, y) e^{i g(b, y)} dy
                       - int_c^d p(a, y) e^{i g(a, y)} dy,

which the adaptive 1D Levin integrator evaluates.  Delamination happens
along the axis where the phase oscillates fastest; the other direction is
handled by transposing the problem.

`nondelaminated_estimate` is the monolithic variant used for comparison: it
collocates the same PDE on a (2k-1)^2 grid against k^2 unknowns and solves
the rectangular system in one truncated solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _kernels
from .cheb import bary_eval, diff_matrix, diff_matrix_x, interp_matrix, tensor_grid
from .errors import EvaluationError
from .geometry import Rectangle
from .levin1d import Levin1DConfig, Oscillator1D, levin1d_adaptive
from .linsolve import SolveConfig, rrqr_solve

# reference-coordinate oscillation below which a rectangle counts as
# low-frequency in the mesh diagnostics
LOW_FREQ_BOUND = 0.25


@dataclass(frozen=True)
class Integrand2D:
    """Amplitude/phase pair f, g on a rectangle.

    Both callables must broadcast over ndarray inputs of identical shape and
    return an array of that shape; the amplitude may be complex, the phase
    must be real.
    """

    amplitude: Callable[[np.ndarray, np.ndarray], np.ndarray]
    phase: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: Rectangle

    def transposed(self) -> "Integrand2D":
        """The integrand with the roles of x and y swapped (same integral)."""
        return Integrand2D(
            amplitude=lambda x, y: self.amplitude(y, x),
            phase=lambda x, y: self.phase(y, x),
            domain=self.domain.transposed(),
        )


@dataclass(frozen=True)
class RectEstimate:
    """Levin estimate of the integral over one rectangle, with diagnostics.

    Attributes
    ----------
    value : complex
        Estimated integral over the rectangle.
    direction : str
        Delamination direction, "x" or "y", in original coordinates.
    p_sup : float
        Sup norm of the fiber solutions over the grid.
    f_sup : float
        Sup norm of the amplitude samples over the grid.
    fiber_ranks : tuple of int
        Kept rank of each fiber solve (single entry for the monolithic
        variant, where it lies in [0, k^2]).
    boundary_subints : int
        Total subintervals accepted by the two edge integrals.
    grad_ratio : float
        max/min of |dg/dv| over the grid along the delamination direction
        (inf when the minimum vanishes, i.e. a stationary line crosses).
    low_freq : bool
        True when the phase changes by less than LOW_FREQ_BOUND radians per
        reference unit in both directions on this rectangle.
    fevals : int
        Integrand evaluation points consumed by this estimate.
    boundary_depth_exceeded : bool
        True when an edge integral hit its bisection depth cap.
    p_grid : ndarray
        Fiber solutions on the k x k grid, delamination axis first.
    """

    value: complex
    direction: str
    p_sup: float
    f_sup: float
    fiber_ranks: tuple[int, ...]
    boundary_subints: int
    grad_ratio: float
    low_freq: bool
    fevals: int
    boundary_depth_exceeded: bool
    p_grid: np.ndarray


def _sample_grid(F: Integrand2D, rect: Rectangle, k: int):
    """Sample f and g on the k x k tensor grid; arrays indexed [i, j] = (x_i, y_j)."""
    grid = tensor_grid(k, rect)
    X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    fv = np.asarray(F.amplitude(X, Y))
    gv = np.asarray(F.phase(X, Y))
    if fv.shape != X.shape or gv.shape != X.shape:
        raise EvaluationError(
            f"evaluators must preserve shape: got f {fv.shape}, g {gv.shape} for {X.shape}"
        )
    if np.iscomplexobj(gv):
        raise EvaluationError("phase evaluator returned complex values")
    if not (np.isfinite(fv).all() and np.isfinite(gv).all()):
        raise EvaluationError("non-finite integrand samples")
    return np.asarray(fv, dtype=np.complex128), np.asarray(gv, dtype=np.float64)


def choose_direction(g_grid: np.ndarray, rect: Rectangle) -> str:
    """Delamination direction: the axis with the larger physical |dg|.

    Compares spectral estimates of max |g_x| and max |g_y| over the grid;
    ties go to "x".
    """
    g_grid = np.asarray(g_grid, dtype=np.float64)
    k = g_grid.shape[0]
    D = diff_matrix(k)
    gx_max = np.max(np.abs(D @ g_grid)) * (2.0 / rect.width)
    gy_max = np.max(np.abs(g_grid @ D.T)) * (2.0 / rect.height)
    return "x" if gx_max >= gy_max else "y"


def _grad_ratio(dref: np.ndarray) -> float:
    amax = float(np.max(np.abs(dref)))
    amin = float(np.min(np.abs(dref)))
    if amin == 0.0:
        return math.inf
    return amax / amin


def _edge_value(
    F: Integrand2D,
    pvals_edge: np.ndarray,
    x0: float,
    span: tuple[float, float],
    transposed: bool,
    eps1d: float,
    eps_trunc_rel: float,
    k1d: int,
    max_depth_1d: int,
    reuse_children: bool,
    solver: SolveConfig,
):
    """Adaptive 1D Levin integral of p(x0, .) e^{i g(x0, .)} along one edge."""

    def amp(yy):
        return bary_eval(pvals_edge, yy, interval=span)

    if transposed:
        phase = lambda yy: F.phase(yy, np.full_like(yy, x0))
    else:
        phase = lambda yy: F.phase(np.full_like(yy, x0), yy)
    osc = Oscillator1D(amplitude=amp, phase=phase, domain=span)
    cfg = Levin1DConfig(
        k1d=k1d,
        eps_sub=eps1d,
        eps_trunc_rel=eps_trunc_rel,
        max_depth=max_depth_1d,
        reuse_children=reuse_children,
        solver=solver,
    )
    return levin1d_adaptive(osc, cfg=cfg)


def _boundary_reduce(
    F, rect_w, transposed, p_right, p_left, p_sup, f_sup, beta, eps_sub,
    eps_trunc_rel, k1d, max_depth_1d, reuse_children, solver,
):
    """Both edge integrals of the working frame; returns (value, subints, fevals, flag)."""
    # the 1D tolerance loosens when the fiber solutions dominate the
    # amplitude, tightening the error actually contributed to the integral
    eps1d = beta * max(p_sup / f_sup, 1.0) * eps_sub
    span = (rect_w.c, rect_w.d)
    common = (transposed, eps1d, eps_trunc_rel, k1d, max_depth_1d, reuse_children, solver)
    right = _edge_value(F, p_right, rect_w.b, span, *common)
    left = _edge_value(F, p_left, rect_w.a, span, *common)
    value = right.value - left.value
    subints = right.sub_intervals + left.sub_intervals
    fevals = right.fevals + left.fevals
    flag = right.depth_exceeded or left.depth_exceeded
    return value, subints, fevals, flag


def delaminated_estimate(
    F: Integrand2D,
    rect: Rectangle,
    k: int = 7,
    eps_trunc_rel: float = 5e-13,
    beta: float = 0.1,
    eps_sub: float = 1e-12,
    *,
    k1d: int = 12,
    solver: SolveConfig | None = None,
    max_depth_1d: int = 60,
    reuse_children: bool = True,
) -> RectEstimate:
    """Fiber-by-fiber Levin estimate of int_rect f e^{i g}.

    Samples f and g on the k x k tensor grid, solves the collocated ODE
    D p + i diag(D g) p = (len/2) f on each fiber along the delamination
    direction by truncated solve (threshold ``eps_trunc_rel`` times the
    fiber matrix two-norm), and reduces to the two edge integrals, each
    evaluated by the adaptive 1D Levin integrator at tolerance
    ``beta * max(p_sup/f_sup, 1) * eps_sub``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not (eps_trunc_rel > 0 and beta > 0 and eps_sub > 0):
        raise ValueError("tolerances must be positive")
    solver = solver or SolveConfig()
    fv, gv = _sample_grid(F, rect, k)
    fevals = k * k
    f_sup = float(np.max(np.abs(fv)))

    D = diff_matrix(k)
    gx_ref = D @ gv
    gy_ref = gv @ D.T
    direction = (
        "x"
        if np.max(np.abs(gx_ref)) * (2.0 / rect.width)
        >= np.max(np.abs(gy_ref)) * (2.0 / rect.height)
        else "y"
    )
    low_freq = (
        np.max(np.abs(gx_ref)) < LOW_FREQ_BOUND and np.max(np.abs(gy_ref)) < LOW_FREQ_BOUND
    )
    transposed = direction == "y"
    if transposed:
        rect_w = rect.transposed()
        fw, gw, dref = fv.T, gv.T, gy_ref.T
    else:
        rect_w = rect
        fw, gw, dref = fv, gv, gx_ref
    grad_ratio = _grad_ratio(dref)

    if f_sup == 0.0:
        return RectEstimate(
            value=0.0 + 0.0j,
            direction=direction,
            p_sup=0.0,
            f_sup=0.0,
            fiber_ranks=(0,) * k,
            boundary_subints=0,
            grad_ratio=grad_ratio,
            low_freq=bool(low_freq),
            fevals=fevals,
            boundary_depth_exceeded=False,
            p_grid=np.zeros((k, k), dtype=np.complex128),
        )

    # fiber-major layout: row j is the fiber at transverse node j
    gw_rows = np.ascontiguousarray(gw.T)
    fw_rows = np.ascontiguousarray(fw.T)
    pvals, ranks = _kernels.active().solve_fibers(
        D,
        gw_rows,
        fw_rows,
        0.5 * rect_w.width,
        float(eps_trunc_rel),
        solver.method_code,
        solver.iteration_enabled,
        float(solver.iteration_tol),
        int(solver.iteration_max),
    )
    p_sup = float(np.max(np.abs(pvals)))
    value, subints, edge_fevals, flag = _boundary_reduce(
        F, rect_w, transposed, pvals[:, k - 1].copy(), pvals[:, 0].copy(),
        p_sup, f_sup, beta, eps_sub, eps_trunc_rel, k1d, max_depth_1d,
        reuse_children, solver,
    )
    return RectEstimate(
        value=complex(value),
        direction=direction,
        p_sup=p_sup,
        f_sup=f_sup,
        fiber_ranks=tuple(int(r) for r in ranks),
        boundary_subints=subints,
        grad_ratio=grad_ratio,
        low_freq=bool(low_freq),
        fevals=fevals + edge_fevals,
        boundary_depth_exceeded=flag,
        p_grid=pvals.T.copy(),
    )


@lru_cache(maxsize=None)
def _fine_collocation(k: int) -> np.ndarray:
    # P_(2k-1, k) (D_x)_k, the constant part of the monolithic system
    return interp_matrix(2 * k - 1, k) @ diff_matrix_x(k)


def nondelaminated_estimate(
    F: Integrand2D,
    rect: Rectangle,
    k: int = 7,
    eps_trunc_rel: float = 5e-13,
    beta: float = 0.1,
    eps_sub: float = 1e-12,
    *,
    k1d: int = 12,
    solver: SolveConfig | None = None,
    max_depth_1d: int = 60,
    reuse_children: bool = True,
) -> RectEstimate:
    """Monolithic variant: one rectangular truncated solve per rectangle.

    Collocates p_x + i g_x p = (len/2) f on the (2k-1) x (2k-1) grid against
    the k x k unknown grid, with g_x sampled spectrally on the fine grid.
    The boundary reduction is identical to `delaminated_estimate`.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not (eps_trunc_rel > 0 and beta > 0 and eps_sub > 0):
        raise ValueError("tolerances must be positive")
    solver = solver or SolveConfig()
    kf = 2 * k - 1
    fv, gv = _sample_grid(F, rect, kf)
    fevals = kf * kf
    f_sup = float(np.max(np.abs(fv)))

    Df = diff_matrix(kf)
    gx_ref = Df @ gv
    gy_ref = gv @ Df.T
    direction = (
        "x"
        if np.max(np.abs(gx_ref)) * (2.0 / rect.width)
        >= np.max(np.abs(gy_ref)) * (2.0 / rect.height)
        else "y"
    )
    low_freq = (
        np.max(np.abs(gx_ref)) < LOW_FREQ_BOUND and np.max(np.abs(gy_ref)) < LOW_FREQ_BOUND
    )
    transposed = direction == "y"
    if transposed:
        rect_w = rect.transposed()
        fw, gw, dref = fv.T, gv.T, gy_ref.T
    else:
        rect_w = rect
        fw, gw, dref = fv, gv, gx_ref
    grad_ratio = _grad_ratio(dref)

    if f_sup == 0.0:
        return RectEstimate(
            value=0.0 + 0.0j,
            direction=direction,
            p_sup=0.0,
            f_sup=0.0,
            fiber_ranks=(0,),
            boundary_subints=0,
            grad_ratio=grad_ratio,
            low_freq=bool(low_freq),
            fevals=fevals,
            boundary_depth_exceeded=False,
            p_grid=np.zeros((k, k), dtype=np.complex128),
        )

    # vectorized in x-fastest order to match the Kronecker operators
    P = interp_matrix(kf, k)
    gx_vec = dref.ravel(order="F")
    A = _fine_collocation(k) + (1j * gx_vec)[:, None] * P
    rhs = (0.5 * rect_w.width) * fw.ravel(order="F")
    if solver.method == "rrqr":
        maxcol = float(np.max(np.linalg.norm(A, axis=0)))
        res = rrqr_solve(A, rhs, eps_trunc_rel * maxcol)
        sol, rank = res.solution, res.rank
    else:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
        thresh = eps_trunc_rel * s[0]
        rank = int(np.count_nonzero(s >= thresh))
        coef = U[:, :rank].conj().T @ rhs
        sol = Vh[:rank].conj().T @ (coef / s[:rank])
    p2 = sol.reshape(k, k, order="F")
    p_sup = float(np.max(np.abs(p2)))

    value, subints, edge_fevals, flag = _boundary_reduce(
        F, rect_w, transposed, np.ascontiguousarray(p2[k - 1, :]),
        np.ascontiguousarray(p2[0, :]), p_sup, f_sup, beta, eps_sub,
        eps_trunc_rel, k1d, max_depth_1d, reuse_children, solver,
    )
    return RectEstimate(
        value=complex(value),
        direction=direction,
        p_sup=p_sup,
        f_sup=f_sup,
        fiber_ranks=(rank,),
        boundary_subints=subints,
        grad_ratio=grad_ratio,
        low_freq=bool(low_freq),
        fevals=fevals + edge_fevals,
        boundary_depth_exceeded=flag,
        p_grid=p2.copy(),
    )
