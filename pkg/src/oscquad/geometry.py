"""Axis-aligned rectangles for the adaptive quadrature drivers.

The quadtree drivers subdivide a rectangle into four congruent children in a
fixed order (SW, SE, NW, NE).  That order is part of the determinism contract:
the worklist is LIFO and results are summed in acceptance order, so reordering
children would change the bit pattern of the final sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Rectangle:
    """Closed rectangle [a, b] x [c, d] with a < b and c < d."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for v in (self.a, self.b, self.c, self.d):
            if not math.isfinite(v):
                raise ValueError(f"rectangle bounds must be finite, got {self}")
        if not (self.a < self.b and self.c < self.d):
            raise ValueError(f"rectangle bounds must satisfy a < b and c < d, got {self}")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def height(self) -> float:
        return self.d - self.c

    @property
    def area(self) -> float:
        return self.width * self.height

    def transposed(self) -> "Rectangle":
        """The rectangle with the roles of x and y swapped."""
        return Rectangle(self.c, self.d, self.a, self.b)

    def children(self) -> tuple["Rectangle", "Rectangle", "Rectangle", "Rectangle"]:
        """Split into four congruent subrectangles at the midpoints.

        Returns
        -------
        tuple of Rectangle
            (SW, SE, NW, NE): [a,mx]x[c,my], [mx,b]x[c,my], [a,mx]x[my,d],
            [mx,b]x[my,d] where mx, my are the side midpoints.
        """
        mx = 0.5 * (self.a + self.b)
        my = 0.5 * (self.c + self.d)
        return (
            Rectangle(self.a, mx, self.c, my),
            Rectangle(mx, self.b, self.c, my),
            Rectangle(self.a, mx, my, self.d),
            Rectangle(mx, self.b, my, self.d),
        )

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        return (self.a - tol <= x <= self.b + tol) and (self.c - tol <= y <= self.d + tol)

    @staticmethod
    def square(lo: float = -1.0, hi: float = 1.0) -> "Rectangle":
        return Rectangle(lo, hi, lo, hi)
