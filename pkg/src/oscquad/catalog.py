"""Benchmark integrand catalog.

Five amplitude/phase families covering the regimes the method targets:
smooth phases with no stationary points (quadratic, arctan), a single
stationary point of varying order (monomial), interior stationary plus
boundary resonance lines (saddle), and a lattice of many stationary points
(lattice).  Each entry builds an `Integrand2D` for a frequency lambda and,
where the family takes one, an integer shape parameter.

Only the arctan family has a closed-form value; the rest are validated
against the adaptive Gauss oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Rectangle
from .levin2d import Integrand2D


def closed_form_arctan(lam: float) -> complex:
    """Exact value of the arctan-phase integral on [0,2]^2.

    Follows from the substitution u = arctan x, v = arctan y, which makes
    the integral a perfect square of a univariate plane-wave integral.
    """
    if lam == 0:
        raise ValueError("closed form requires lam != 0")
    return -(((1.0 - np.exp(1j * lam * math.atan(2.0))) / lam) ** 2)


@dataclass(frozen=True)
class CatalogEntry:
    """A parameterized integrand family with an optional exact reference."""

    name: str
    domain: Rectangle
    param_name: str | None
    param_default: int | None
    summary: str
    _make: Callable[[float, int | None], Integrand2D]
    _reference: Callable[[float, int | None], complex] | None = None

    def make(self, lam: float, param: int | None = None) -> Integrand2D:
        """Build the integrand at frequency lam (param defaults per entry)."""
        if not (np.isfinite(lam) and lam > 0):
            raise ValueError(f"lam must be positive and finite, got {lam}")
        param = self._resolve_param(param)
        return self._make(lam, param)

    def reference(self, lam: float, param: int | None = None) -> complex | None:
        """Closed-form value when the family has one, else None."""
        if self._reference is None:
            return None
        return self._reference(lam, self._resolve_param(param))

    def _resolve_param(self, param: int | None) -> int | None:
        if self.param_name is None:
            if param is not None:
                raise ValueError(f"entry {self.name!r} takes no parameter")
            return None
        if param is None:
            return self.param_default
        if not (isinstance(param, (int, np.integer)) and param >= 1):
            raise ValueError(f"{self.param_name} must be a positive integer, got {param}")
        return int(param)


def _quadratic(lam, param):
    return Integrand2D(
        amplitude=lambda x, y: np.cos(x + y),
        phase=lambda x, y: lam * (x + y + x * x + y * y),
        domain=Rectangle(0.0, 1.0, 0.0, 1.0),
    )


def _arctan(lam, param):
    return Integrand2D(
        amplitude=lambda x, y: 1.0 / ((1.0 + x * x) * (1.0 + y * y)),
        phase=lambda x, y: lam * (np.arctan(x) + np.arctan(y)),
        domain=Rectangle(0.0, 2.0, 0.0, 2.0),
    )


def _monomial(lam, n):
    return Integrand2D(
        amplitude=lambda x, y: 1.0 / (1.0 + x * x + y * y),
        phase=lambda x, y: lam * (x**n + y**n),
        domain=Rectangle(-1.0, 1.0, -1.0, 1.0),
    )


def _saddle(lam, param):
    return Integrand2D(
        amplitude=lambda x, y: 1.0 + x * y,
        phase=lambda x, y: lam * (x * x - x * y - y * y),
        domain=Rectangle(-1.0, 1.0, -1.0, 1.0),
    )


def _lattice(lam, m):
    half_pi_m = 0.5 * math.pi * m

    def phase(x, y):
        sx = np.sin(half_pi_m * x)
        sy = np.sin(half_pi_m * y)
        return lam * (sx * sx + sy * sy)

    return Integrand2D(
        amplitude=lambda x, y: np.ones_like(x, dtype=complex),
        phase=phase,
        domain=Rectangle(0.0, 1.0, 0.0, 1.0),
    )


ENTRIES: dict[str, CatalogEntry] = {
    e.name: e
    for e in (
        CatalogEntry(
            name="quadratic",
            domain=Rectangle(0.0, 1.0, 0.0, 1.0),
            param_name=None,
            param_default=None,
            summary="cos(x+y) with phase x + y + x^2 + y^2; smooth, no stationary points",
            _make=_quadratic,
        ),
        CatalogEntry(
            name="arctan",
            domain=Rectangle(0.0, 2.0, 0.0, 2.0),
            param_name=None,
            param_default=None,
            summary="rational amplitude with phase arctan(x) + arctan(y); closed form known",
            _make=_arctan,
            _reference=lambda lam, p: closed_form_arctan(lam),
        ),
        CatalogEntry(
            name="monomial",
            domain=Rectangle(-1.0, 1.0, -1.0, 1.0),
            param_name="n",
            param_default=2,
            summary="phase x^n + y^n; one stationary point of order n-1 at the origin",
            _make=_monomial,
        ),
        CatalogEntry(
            name="saddle",
            domain=Rectangle(-1.0, 1.0, -1.0, 1.0),
            param_name=None,
            param_default=None,
            summary="phase x^2 - xy - y^2; stationary origin and resonance lines y=2x, y=-x/2",
            _make=_saddle,
        ),
        CatalogEntry(
            name="lattice",
            domain=Rectangle(0.0, 1.0, 0.0, 1.0),
            param_name="m",
            param_default=1,
            summary="sin^2 lattice phase with (m+1)^2 stationary points in the unit square",
            _make=_lattice,
        ),
    )
}


def get_entry(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        known = ", ".join(sorted(ENTRIES))
        raise KeyError(f"unknown entry {name!r}; available: {known}") from None
