"""Adaptive bivariate Levin integration over a rectangle.

Drives the single-rectangle Levin estimate through quad-tree subdivision:
a rectangle is accepted when its estimate agrees with the sum over its four
quadrants to the subdivision tolerance, otherwise the quadrants are pushed
and refined.  The accepted rectangles tile the root and their values sum,
in acceptance order, to the returned integral.

The truncation threshold is global: eps_trunc = beta0 * eps_sub / ||f||_inf
with the sup norm taken over the root grid once, so one run uses one
threshold everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._driver import adaptive_worklist
from .geometry import Rectangle
from .levin2d import (
    Integrand2D,
    RectEstimate,
    delaminated_estimate,
    nondelaminated_estimate,
    _sample_grid,
)
from .linsolve import SolveConfig


@dataclass(frozen=True)
class AdaptiveConfig:
    """Parameters of the adaptive driver and the per-rectangle estimates.

    Defaults follow the reference configuration: order-7 bivariate
    collocation, subdivision tolerance 1e-12, truncation weight beta0 = 1/2,
    12-point boundary collocation with safety factor beta = 0.1.
    """

    k: int = 7
    eps_sub: float = 1e-12
    beta0: float = 0.5
    beta: float = 0.1
    k1d: int = 12
    max_depth: int = 40
    max_depth_1d: int = 60
    solver: SolveConfig = field(default_factory=SolveConfig)
    use_nondelaminating: bool = False
    reuse_children: bool = True

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.k1d < 3:
            raise ValueError("k1d must be at least 3")
        if not (self.eps_sub > 0 and self.beta0 > 0 and self.beta > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 0 or self.max_depth_1d < 0:
            raise ValueError("depth limits must be nonnegative")


@dataclass(frozen=True)
class MeshRecord:
    """One accepted rectangle of the adaptive mesh."""

    rect: Rectangle
    depth: int
    direction: str
    grad_ratio: float
    low_freq: bool
    value: complex


@dataclass
class AdaptiveResult:
    """Integral value plus the accepted mesh and cost counters.

    fevals counts integrand evaluation points over every estimate computed,
    split rectangles included; sub_intervals likewise totals the 1D boundary
    work.  depth_exceeded is set when either the 2D quad-tree or any boundary
    bisection hit its depth cap, meaning the value may not be at tolerance.
    """

    value: complex
    mesh: list[MeshRecord]
    rect_evals: int
    fevals: int
    sub_intervals: int
    depth_exceeded: bool


def adaptive_integrate(
    F: Integrand2D,
    root: Rectangle | None = None,
    cfg: AdaptiveConfig | None = None,
) -> AdaptiveResult:
    """Integrate f e^{i g} over `root` (defaults to F.domain) adaptively."""
    cfg = cfg or AdaptiveConfig()
    root = root or F.domain

    # one global truncation threshold, normalized by the amplitude scale
    fv, _ = _sample_grid(F, root, cfg.k)
    f_sup0 = float(np.max(np.abs(fv)))
    counters = {"fevals": cfg.k * cfg.k, "subints": 0, "flag1d": False}

    if f_sup0 == 0.0:
        record = MeshRecord(
            rect=root, depth=0, direction="x", grad_ratio=np.inf,
            low_freq=True, value=0.0 + 0.0j,
        )
        return AdaptiveResult(
            value=0.0 + 0.0j,
            mesh=[record],
            rect_evals=0,
            fevals=counters["fevals"],
            sub_intervals=0,
            depth_exceeded=False,
        )

    eps_trunc_rel = cfg.beta0 * cfg.eps_sub / f_sup0
    rect_estimate = (
        nondelaminated_estimate if cfg.use_nondelaminating else delaminated_estimate
    )

    def estimate(rect: Rectangle) -> RectEstimate:
        est = rect_estimate(
            F,
            rect,
            cfg.k,
            eps_trunc_rel,
            cfg.beta,
            cfg.eps_sub,
            k1d=cfg.k1d,
            solver=cfg.solver,
            max_depth_1d=cfg.max_depth_1d,
            reuse_children=cfg.reuse_children,
        )
        counters["fevals"] += est.fevals
        counters["subints"] += est.boundary_subints
        counters["flag1d"] = counters["flag1d"] or est.boundary_depth_exceeded
        return est

    run = adaptive_worklist(
        root,
        estimate,
        cfg.eps_sub,
        cfg.max_depth,
        value_of=lambda e: e.value,
        reuse_children=cfg.reuse_children,
    )
    mesh = [
        MeshRecord(
            rect=rect,
            depth=depth,
            direction=est.direction,
            grad_ratio=est.grad_ratio,
            low_freq=est.low_freq,
            value=est.value,
        )
        for rect, depth, est in run.accepted
    ]
    return AdaptiveResult(
        value=run.value,
        mesh=mesh,
        rect_evals=run.estimates,
        fevals=counters["fevals"],
        sub_intervals=counters["subints"],
        depth_exceeded=run.depth_exceeded or counters["flag1d"],
    )


def mesh_dump(result: AdaptiveResult) -> list[dict]:
    """Flatten the accepted mesh to plain records for serialization."""
    return [
        {
            "x0": r.rect.a,
            "x1": r.rect.b,
            "y0": r.rect.c,
            "y1": r.rect.d,
            "depth": r.depth,
            "direction": r.direction,
            "grad_ratio": r.grad_ratio,
            "low_freq": r.low_freq,
        }
        for r in result.mesh
    ]
