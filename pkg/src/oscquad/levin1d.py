"""Adaptive univariate Levin quadrature.

Integrals of the form int_a^b f(x) exp(i g(x)) dx are computed without
resolving the oscillation: collocating p' + i g' p = f on a small Chebyshev
grid turns the integral into the boundary difference
p(b) e^{i g(b)} - p(a) e^{i g(a)}.  The collocation matrix D + i diag(g') is
solved by truncated SVD (or rank-revealing QR), which is what keeps the
method stable across stationary points of g, where the system is nearly
rank-deficient.

The adaptive wrapper bisects intervals until the whole-interval value agrees
with the sum over the halves.  The fixed-order solve is exact for phases that
the grid resolves, so for a plane wave the adaptive pass accepts the root
interval immediately no matter how large the frequency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .cheb import cheb_nodes, diff_matrix
from .errors import EvaluationError
from .linsolve import SolveConfig


@dataclass(frozen=True)
class Oscillator1D:
    """Amplitude/phase pair f, g on a closed interval.

    Both callables must accept an ndarray of points and return an array of
    the same shape; the amplitude may be complex, the phase must be real.
    """

    amplitude: Callable[[np.ndarray], np.ndarray]
    phase: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]

    def __post_init__(self) -> None:
        a, b = self.domain
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise ValueError(f"domain must be a finite interval with a < b, got {self.domain}")


@dataclass(frozen=True)
class Levin1DConfig:
    """Parameters of the adaptive 1D integrator.

    eps_sub is the absolute acceptance threshold of the bisection test;
    eps_trunc_rel scales the matrix two-norm into the truncation threshold of
    the collocation solves.  `solver` selects the dense method and the
    optional diagonal iteration; its own threshold field is ignored here.
    """

    k1d: int = 12
    eps_sub: float = 1e-12
    eps_trunc_rel: float = 5e-13
    max_depth: int = 60
    reuse_children: bool = True
    solver: SolveConfig = field(default_factory=SolveConfig)

    def __post_init__(self) -> None:
        if self.k1d < 3:
            raise ValueError("k1d must be at least 3")
        if not (self.eps_sub > 0 and self.eps_trunc_rel > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")


@dataclass
class Levin1DResult:
    value: complex
    sub_intervals: int
    fevals: int
    depth_exceeded: bool = False


def _sample_rows(
    osc: Oscillator1D, intervals: Sequence[tuple[float, float]], k: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Sample f and g on the k-point grid of each interval, one call per function."""
    t = cheb_nodes(k)
    m = len(intervals)
    xs = np.empty((m, k))
    scales = np.empty(m)
    for i, (a, b) in enumerate(intervals):
        xs[i] = 0.5 * (a * (1.0 - t) + b * (1.0 + t))
        scales[i] = 0.5 * (b - a)
    flat = xs.ravel()
    fv = np.asarray(osc.amplitude(flat))
    gv = np.asarray(osc.phase(flat))
    if fv.shape != flat.shape or gv.shape != flat.shape:
        raise EvaluationError(
            f"evaluators must preserve shape: got f {fv.shape}, g {gv.shape} for {flat.shape}"
        )
    if np.iscomplexobj(gv):
        raise EvaluationError("phase evaluator returned complex values")
    if not (np.isfinite(fv).all() and np.isfinite(gv).all()):
        raise EvaluationError("non-finite integrand samples")
    fv = np.ascontiguousarray(fv.reshape(m, k), dtype=np.complex128)
    gv = np.ascontiguousarray(gv.reshape(m, k), dtype=np.float64)
    return gv, fv, scales, m * k


def _fixed_values(osc, intervals, k, eps_trunc_rel, solver: SolveConfig):
    gv, fv, scales, n = _sample_rows(osc, intervals, k)
    values, _ranks = _kernels.active().levin_fixed_batch(
        diff_matrix(k),
        gv,
        fv,
        scales,
        float(eps_trunc_rel),
        solver.method_code,
        solver.iteration_enabled,
        float(solver.iteration_tol),
        int(solver.iteration_max),
    )
    return values, n


def levin1d_fixed(
    osc: Oscillator1D,
    interval: tuple[float, float] | None = None,
    k1d: int = 12,
    eps_trunc_rel: float = 5e-13,
    solver: SolveConfig | None = None,
) -> complex:
    """Single fixed-order Levin estimate of the integral over `interval`.

    Collocates on the k1d-point Chebyshev grid of the interval in reference
    coordinates (the phase derivative comes from the differentiation matrix,
    the interval half-width scales the right-hand side) and returns
    p(beta) e^{i g(beta)} - p(alpha) e^{i g(alpha)}.
    """
    if interval is None:
        interval = osc.domain
    a, b = interval
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError(f"invalid interval {interval}")
    values, _ = _fixed_values(osc, [interval], k1d, eps_trunc_rel, solver or SolveConfig())
    return complex(values[0])


def levin1d_adaptive(
    osc: Oscillator1D,
    interval: tuple[float, float] | None = None,
    cfg: Levin1DConfig | None = None,
) -> Levin1DResult:
    """Adaptively bisected Levin quadrature over `interval`.

    Accepts an interval when its fixed-order value agrees with the sum over
    its halves to within cfg.eps_sub (absolute); intervals at cfg.max_depth
    are accepted unconditionally and flagged.  The two halves of each split
    are sampled and solved in one batch.
    """
    cfg = cfg or Levin1DConfig()
    if interval is None:
        interval = osc.domain
    alpha, beta = interval
    if not (np.isfinite(alpha) and np.isfinite(beta) and alpha < beta):
        raise ValueError(f"invalid interval {interval}")

    solve = lambda ivals: _fixed_values(osc, ivals, cfg.k1d, cfg.eps_trunc_rel, cfg.solver)
    fevals = 0
    total = 0.0 + 0.0j
    sub_intervals = 0
    depth_exceeded = False
    stack: list[tuple[float, float, int, complex | None]] = [(alpha, beta, 0, None)]
    while stack:
        a, b, depth, val = stack.pop()
        if val is None:
            vals, n = solve([(a, b)])
            fevals += n
            val = complex(vals[0])
        if depth >= cfg.max_depth:
            total += val
            sub_intervals += 1
            depth_exceeded = True
            continue
        mid = 0.5 * (a + b)
        halves, n = solve([(a, mid), (mid, b)])
        fevals += n
        if abs(val - (halves[0] + halves[1])) < cfg.eps_sub:
            total += val
            sub_intervals += 1
        elif cfg.reuse_children:
            stack.append((a, mid, depth + 1, complex(halves[0])))
            stack.append((mid, b, depth + 1, complex(halves[1])))
        else:
            stack.append((a, mid, depth + 1, None))
            stack.append((mid, b, depth + 1, None))
    return Levin1DResult(total, sub_intervals, fevals, depth_exceeded)
