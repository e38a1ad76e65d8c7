"""Generic whole-vs-children adaptive subdivision driver.

Both the Levin integrator and the Gauss oracle refine the same way: estimate
an integral over a rectangle, estimate it over the four children, accept the
whole-rectangle value when the two agree to tolerance, otherwise recurse on
the children.  This module owns that control flow so it is tested once.

Determinism contract: the worklist is a LIFO stack, children are pushed in
(SW, SE, NW, NE) order, and the total is accumulated in acceptance order.
With `reuse_children` a child's estimate from its parent's split test is
carried along instead of recomputed on pop; estimates are pure functions of
the rectangle, so both settings produce bit-identical sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .geometry import Rectangle


@dataclass
class DriverResult:
    value: complex
    accepted: list  # (rect, depth, estimate) in acceptance order
    pops: int
    estimates: int
    depth_exceeded: bool


def adaptive_worklist(
    root: Rectangle,
    estimate: Callable[[Rectangle], Any],
    eps: float,
    max_depth: int,
    *,
    value_of: Callable[[Any], complex] = lambda e: e,
    estimate_children: Callable[[Rectangle, Sequence[Rectangle]], Sequence[Any]] | None = None,
    reuse_children: bool = True,
) -> DriverResult:
    """Run the subdivision loop from `root` down to agreement or `max_depth`.

    Parameters
    ----------
    estimate : callable
        Rectangle -> estimate object (any type; `value_of` extracts the
        complex integral value from it).
    eps : float
        Absolute acceptance threshold on |whole - sum(children)|.
    estimate_children : callable, optional
        Batched hook (rect, children) -> four estimates; defaults to mapping
        `estimate` over the children one at a time.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if estimate_children is None:
        estimate_children = lambda rect, kids: [estimate(r) for r in kids]

    stack: list[tuple[Rectangle, int, Any]] = [(root, 0, None)]
    total = 0.0 + 0.0j
    accepted: list = []
    pops = 0
    estimates = 0
    depth_exceeded = False
    while stack:
        rect, depth, est = stack.pop()
        pops += 1
        if est is None:
            est = estimate(rect)
            estimates += 1
        if depth >= max_depth:
            total += value_of(est)
            accepted.append((rect, depth, est))
            depth_exceeded = True
            continue
        kids = rect.children()
        kid_ests = estimate_children(rect, kids)
        estimates += 4
        child_sum = 0.0 + 0.0j
        for e in kid_ests:
            child_sum += value_of(e)
        if abs(value_of(est) - child_sum) < eps:
            total += value_of(est)
            accepted.append((rect, depth, est))
        else:
            for r, e in zip(kids, kid_ests):
                stack.append((r, depth + 1, e if reuse_children else None))
    return DriverResult(total, accepted, pops, estimates, depth_exceeded)
