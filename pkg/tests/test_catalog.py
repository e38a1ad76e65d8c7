"""Tests for the benchmark integrand catalog."""

import math

import numpy as np
import pytest

from oscquad.catalog import ENTRIES, CatalogEntry, closed_form_arctan, get_entry
from oscquad.oracle import adaptive_gauss


def fd_gradient(g, x, y, h=1e-4):
    # fourth-order central differences keep truncation below 1e-12*lam
    def d(f, t):
        return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)

    gx = d(lambda t: g(np.asarray(t), np.asarray(y)), x)
    gy = d(lambda t: g(np.asarray(x), np.asarray(t)), y)
    return float(gx), float(gy)


class TestEntries:
    def test_registry_contents(self):
        assert sorted(ENTRIES) == ["arctan", "lattice", "monomial", "quadratic", "saddle"]

    def test_formulas_match_direct_evaluation(self):
        rng = np.random.default_rng(3)
        lam = 7.5
        checks = {
            "quadratic": (
                lambda x, y: np.cos(x + y),
                lambda x, y: lam * (x + y + x * x + y * y),
            ),
            "arctan": (
                lambda x, y: 1.0 / ((1.0 + x * x) * (1.0 + y * y)),
                lambda x, y: lam * (np.arctan(x) + np.arctan(y)),
            ),
            "saddle": (
                lambda x, y: 1.0 + x * y,
                lambda x, y: lam * (x * x - x * y - y * y),
            ),
        }
        for name, (f, g) in checks.items():
            entry = get_entry(name)
            F = entry.make(lam)
            r = entry.domain
            x = rng.uniform(r.a, r.b, 40)
            y = rng.uniform(r.c, r.d, 40)
            np.testing.assert_allclose(F.amplitude(x, y), f(x, y), rtol=1e-15)
            np.testing.assert_allclose(F.phase(x, y), g(x, y), rtol=1e-15)

    def test_parameterized_formulas(self):
        rng = np.random.default_rng(4)
        lam = 12.0
        F = get_entry("monomial").make(lam, 5)
        x = rng.uniform(-1, 1, 40)
        y = rng.uniform(-1, 1, 40)
        np.testing.assert_allclose(F.phase(x, y), lam * (x**5 + y**5), rtol=1e-14)
        F = get_entry("lattice").make(lam, 3)
        x = rng.uniform(0, 1, 40)
        y = rng.uniform(0, 1, 40)
        expect = lam * (np.sin(1.5 * np.pi * x) ** 2 + np.sin(1.5 * np.pi * y) ** 2)
        np.testing.assert_allclose(F.phase(x, y), expect, rtol=1e-13)

    def test_phases_are_real(self):
        for entry in ENTRIES.values():
            F = entry.make(10.0)
            mid_x = 0.5 * (entry.domain.a + entry.domain.b)
            mid_y = 0.5 * (entry.domain.c + entry.domain.d)
            g = F.phase(np.array([mid_x]), np.array([mid_y]))
            assert not np.iscomplexobj(g)

    def test_domains_match_integrands(self):
        for entry in ENTRIES.values():
            assert entry.make(10.0).domain == entry.domain

    def test_param_validation(self):
        with pytest.raises(ValueError):
            get_entry("saddle").make(10.0, 3)
        with pytest.raises(ValueError):
            get_entry("monomial").make(10.0, 0)
        with pytest.raises(ValueError):
            get_entry("monomial").make(-5.0)
        assert get_entry("monomial").make(10.0).phase is not None  # default n

    def test_unknown_entry(self):
        with pytest.raises(KeyError):
            get_entry("nope")


class TestClosedForm:
    def test_vanishes_at_full_period(self):
        lam = 2 * math.pi / math.atan(2.0)
        assert abs(closed_form_arctan(lam)) <= 1e-15

    def test_large_frequency_decay(self):
        assert abs(closed_form_arctan(1e4)) <= 4e-8

    def test_matches_oracle_at_low_frequency(self):
        F = get_entry("arctan").make(10.0)
        ref = adaptive_gauss(F, tol=1e-14)
        assert abs(closed_form_arctan(10.0) - ref) <= 1e-12

    def test_zero_frequency_rejected(self):
        with pytest.raises(ValueError):
            closed_form_arctan(0.0)

    def test_reference_only_for_arctan(self):
        assert get_entry("arctan").reference(10.0) is not None
        for name in ("quadratic", "monomial", "saddle", "lattice"):
            assert get_entry(name).reference(10.0) is None


class TestStationaryPoints:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_lattice_gradient_vanishes_at_lattice_points(self, m):
        lam = 100.0
        F = get_entry("lattice").make(lam, m)
        for i in range(m + 1):
            for j in range(m + 1):
                gx, gy = fd_gradient(F.phase, i / m, j / m)
                assert abs(gx) <= 1e-10 * lam
                assert abs(gy) <= 1e-10 * lam

    def test_lattice_point_count_is_complete(self):
        # away from the lattice the gradient must NOT vanish
        F = get_entry("lattice").make(100.0, 2)
        gx, gy = fd_gradient(F.phase, 0.13, 0.21)
        assert math.hypot(gx, gy) > 1.0

    def test_saddle_stationary_origin(self):
        F = get_entry("saddle").make(100.0)
        gx, gy = fd_gradient(F.phase, 0.0, 0.0)
        assert math.hypot(gx, gy) <= 1e-10 * 100.0

    def test_saddle_resonance_lines(self):
        # g_x vanishes on y = 2x and g_y on y = -x/2
        F = get_entry("saddle").make(100.0)
        gx, _ = fd_gradient(F.phase, 0.3, 0.6)
        assert abs(gx) <= 1e-10 * 100.0
        _, gy = fd_gradient(F.phase, 0.4, -0.2)
        assert abs(gy) <= 1e-10 * 100.0
