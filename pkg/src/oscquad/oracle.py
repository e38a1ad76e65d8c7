"""Adaptive Gauss-Legendre reference quadrature.

This is the verification path: a fixed tensor-product Gauss rule inside the
same whole-vs-children subdivision driver the Levin integrator uses.  It
resolves the oscillation pointwise, so its cost grows with frequency (between
linearly and quadratically for the quadtree), which is exactly why it serves
as the slow-but-sure reference rather than the method of interest.

Nodes and weights come from Newton's iteration on the Legendre recurrence,
converged to 1e-15 and symmetrized, so the rule is self-contained and
reproducible to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _kernels
from ._driver import adaptive_worklist
from .errors import EvaluationError
from .geometry import Rectangle
from .levin2d import Integrand2D


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GaussRule:
    """n-point Gauss-Legendre rule on [-1, 1]."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # three-term recurrence for P_n and its derivative
    p0 = np.ones_like(x)
    p1 = x.copy()
    for m in range(2, n + 1):
        p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def gauss_rule(n: int = 10) -> GaussRule:
    """Gauss-Legendre nodes and weights by Newton iteration.

    Starts from the Chebyshev-based estimate cos(pi (i + 3/4)/(n + 1/2)) and
    iterates x <- x - P_n(x)/P_n'(x) until the update falls below 1e-15,
    then symmetrizes nodes and weights about the origin.
    """
    if n < 1:
        raise ValueError(f"rule size must be at least 1, got {n}")
    if n == 1:
        return GaussRule(1, _readonly(np.zeros(1)), _readonly(np.full(1, 2.0)))
    i = np.arange(n)
    x = np.cos(np.pi * (i + 0.75) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # exact +/- symmetry; the initial guesses come in mirrored pairs
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return GaussRule(n, _readonly(x[order]), _readonly(w[order]))


def _sample_grids(F: Integrand2D, rects: list[Rectangle], nodes: np.ndarray):
    """Tensor-grid samples of f and g over several rectangles in one call."""
    n = nodes.shape[0]
    m = len(rects)
    xs = np.empty((m, n, n))
    ys = np.empty((m, n, n))
    jacs = np.empty(m)
    half = 0.5 * (nodes + 1.0)
    for r, rect in enumerate(rects):
        gx = rect.a + rect.width * half
        gy = rect.c + rect.height * half
        xs[r] = gx[:, None]
        ys[r] = gy[None, :]
        jacs[r] = 0.25 * rect.area
    fv = np.asarray(F.amplitude(xs, ys))
    gv = np.asarray(F.phase(xs, ys))
    if fv.shape != xs.shape or gv.shape != xs.shape:
        raise EvaluationError(
            f"evaluators must preserve shape: got f {fv.shape}, g {gv.shape} for {xs.shape}"
        )
    if np.iscomplexobj(gv):
        raise EvaluationError("phase evaluator returned complex values")
    if not (np.isfinite(fv).all() and np.isfinite(gv).all()):
        raise EvaluationError("non-finite integrand samples")
    fv = np.ascontiguousarray(fv, dtype=np.complex128)
    gv = np.ascontiguousarray(gv, dtype=np.float64)
    return fv, gv, jacs, m * n * n


def gauss_rect(F: Integrand2D, rect: Rectangle, rule: GaussRule | None = None) -> complex:
    """Fixed tensor-product Gauss-Legendre estimate of the integral over `rect`."""
    rule = rule or gauss_rule()
    fv, gv, jacs, _ = _sample_grids(F, [rect], rule.nodes)
    out = _kernels.active().gauss_tensor_batch(fv, gv, rule.weights, jacs)
    return complex(out[0])


@dataclass
class GaussResult:
    value: complex
    rect_evals: int
    fevals: int
    depth_exceeded: bool


def adaptive_gauss_result(
    F: Integrand2D,
    root: Rectangle | None = None,
    tol: float = 1e-14,
    *,
    n: int = 10,
    max_depth: int = 60,
    reuse_children: bool = True,
) -> GaussResult:
    """Adaptive Gauss-Legendre integration with cost counters."""
    root = root or F.domain
    rule = gauss_rule(n)
    fevals = 0

    def estimate_many(rects):
        nonlocal fevals
        fv, gv, jacs, cnt = _sample_grids(F, rects, rule.nodes)
        fevals += cnt
        return _kernels.active().gauss_tensor_batch(fv, gv, rule.weights, jacs)

    res = adaptive_worklist(
        root,
        estimate=lambda rect: complex(estimate_many([rect])[0]),
        eps=tol,
        max_depth=max_depth,
        estimate_children=lambda rect, kids: [complex(v) for v in estimate_many(list(kids))],
        reuse_children=reuse_children,
    )
    return GaussResult(res.value, res.estimates, fevals, res.depth_exceeded)


def adaptive_gauss(
    F: Integrand2D,
    root: Rectangle | None = None,
    tol: float = 1e-14,
    *,
    n: int = 10,
    max_depth: int = 60,
) -> complex:
    """Adaptive Gauss-Legendre value of the oscillatory integral over `root`."""
    return adaptive_gauss_result(F, root, tol, n=n, max_depth=max_depth).value


def adaptive_gauss_1d(
    amplitude: Callable[[np.ndarray], np.ndarray],
    phase: Callable[[np.ndarray], np.ndarray],
    interval: tuple[float, float],
    tol: float = 1e-14,
    *,
    n: int = 10,
    max_depth: int = 60,
) -> complex:
    """1D analogue of `adaptive_gauss` for int f e^{i g} over an interval."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    rule = gauss_rule(n)
    half = 0.5 * (rule.nodes + 1.0)

    def est(a: float, b: float) -> complex:
        x = a + (b - a) * half
        fv = np.asarray(amplitude(x), dtype=np.complex128)
        gv = np.asarray(phase(x), dtype=np.float64)
        if not (np.isfinite(fv).all() and np.isfinite(gv).all()):
            raise EvaluationError("non-finite integrand samples")
        return complex(0.5 * (b - a) * np.sum(rule.weights * fv * np.exp(1j * gv)))

    a0, b0 = interval
    stack = [(float(a0), float(b0), 0, est(float(a0), float(b0)))]
    total = 0.0 + 0.0j
    while stack:
        a, b, depth, val = stack.pop()
        mid = 0.5 * (a + b)
        lv, rv = est(a, mid), est(mid, b)
        if abs(val - (lv + rv)) < tol or depth >= max_depth:
            total += val
        else:
            stack.append((a, mid, depth + 1, lv))
            stack.append((mid, b, depth + 1, rv))
    return total
