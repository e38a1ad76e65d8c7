import math

import numpy as np
import pytest

from oscquad.cheb import (
    bary_eval,
    bary_weights,
    cheb_coeffs,
    cheb_nodes,
    diff_matrix,
    diff_matrix_x,
    interp_matrix,
    interp_matrix_1d,
    tensor_grid,
)
from oscquad.geometry import Rectangle


class TestNodes:
    def test_k2(self):
        assert cheb_nodes(2).tolist() == [-1.0, 1.0]

    def test_k3(self):
        assert cheb_nodes(3).tolist() == [-1.0, 0.0, 1.0]

    def test_k5_second_node(self):
        # cos(3*pi/4): j=2 in the 1-based cos((k-j)pi/(k-1)) formula
        assert cheb_nodes(5)[1] == pytest.approx(math.cos(3 * math.pi / 4), abs=1e-15)

    @pytest.mark.parametrize("k", [2, 3, 4, 7, 12, 13, 40])
    def test_formula_and_symmetry(self, k):
        x = cheb_nodes(k)
        ref = np.cos((k - np.arange(1, k + 1)) * np.pi / (k - 1))
        assert np.allclose(x, ref, atol=1e-15, rtol=0)
        assert x[0] == -1.0 and x[-1] == 1.0
        # exact symmetry, not just approximate
        assert np.array_equal(x, -x[::-1])
        assert np.all(np.diff(x) > 0)

    def test_k1_rejected(self):
        with pytest.raises(ValueError):
            cheb_nodes(1)

    def test_readonly(self):
        with pytest.raises(ValueError):
            cheb_nodes(5)[0] = 0.0


class TestTensorGrid:
    def test_ordering_k2_unit_square(self):
        g = tensor_grid(2, Rectangle(0.0, 1.0, 0.0, 1.0))
        assert g.points.tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]

    @pytest.mark.parametrize("k", [2, 3, 7])
    def test_x_index_fastest(self, k):
        g = tensor_grid(k, Rectangle(-2.0, 0.5, 1.0, 3.0))
        for j in range(k):
            for i in range(k):
                assert g.points[i + k * j, 0] == g.xs[i]
                assert g.points[i + k * j, 1] == g.ys[j]

    def test_exact_corners(self):
        r = Rectangle(0.1, 0.3, -0.7, 1.9)
        g = tensor_grid(7, r)
        assert g.xs[0] == r.a and g.xs[-1] == r.b
        assert g.ys[0] == r.c and g.ys[-1] == r.d


class TestDiffMatrix:
    def test_negated_row_sum_diagonal(self):
        # The diagonal is exactly the negated off-diagonal row sum; applying
        # D to a constant therefore leaves only re-association round-off.
        for k in (2, 3, 7, 12):
            D = diff_matrix(k)
            off = D.copy()
            np.fill_diagonal(off, 0.0)
            assert np.array_equal(np.diag(D), -off.sum(axis=1))
            resid = np.max(np.abs(D @ np.ones(k)))
            assert resid <= 1e-14 * max(1.0, np.max(np.abs(D)))

    def test_k3_on_square(self):
        # x^2 sampled at (-1, 0, 1) is (1, 0, 1); derivative 2x is (-2, 0, 2)
        got = diff_matrix(3) @ np.array([1.0, 0.0, 1.0])
        assert np.allclose(got, [-2.0, 0.0, 2.0], atol=1e-14, rtol=0)

    def test_derivative_of_identity(self):
        for k in (3, 7, 12):
            got = diff_matrix(k) @ cheb_nodes(k)
            assert np.allclose(got, 1.0, atol=1e-14, rtol=0)

    @pytest.mark.parametrize("k", [3, 7, 12])
    def test_exact_on_polynomials(self, k):
        rng = np.random.default_rng(20260817 + k)
        x = cheb_nodes(k)
        D = diff_matrix(k)
        for _ in range(100):
            c = rng.uniform(-1, 1, size=k)  # degree < k
            v = np.polynomial.polynomial.polyval(x, c)
            dv = np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(c))
            err = np.max(np.abs(D @ v - dv))
            scale = max(1.0, np.max(np.abs(dv)))
            assert err / scale <= 1e-11

    def test_tensor_x_derivative(self):
        k = 5
        g = tensor_grid(k, Rectangle.square())
        x, y = g.points[:, 0], g.points[:, 1]
        got = diff_matrix_x(k) @ (x**3 * y)
        assert np.allclose(got, 3 * x**2 * y, atol=1e-12, rtol=0)


class TestInterpMatrix:
    def test_identity_when_equal(self):
        P = interp_matrix_1d(4, 4)
        assert np.array_equal(P, np.eye(4))
        assert np.array_equal(interp_matrix(4, 4), np.eye(16))

    def test_preserves_constants(self):
        for k, ell in ((5, 3), (13, 7), (3, 9)):
            P = interp_matrix(k, ell)
            assert np.allclose(P @ np.ones(ell * ell), 1.0, atol=1e-13, rtol=0)

    def test_bilinear_product(self):
        # f(x, y) = x*y has degree (1, 1), exactly representable on both grids
        src = tensor_grid(3, Rectangle.square())
        dst = tensor_grid(5, Rectangle.square())
        vals = src.points[:, 0] * src.points[:, 1]
        want = dst.points[:, 0] * dst.points[:, 1]
        assert np.allclose(interp_matrix(5, 3) @ vals, want, atol=1e-13, rtol=0)

    @pytest.mark.parametrize("k,ell", [(7, 4), (9, 6), (4, 7)])
    def test_exact_on_low_degree(self, k, ell):
        rng = np.random.default_rng(7 + 10 * k + ell)
        src = tensor_grid(ell, Rectangle.square())
        dst = tensor_grid(k, Rectangle.square())
        deg = min(ell, 4)
        for _ in range(20):
            c = rng.uniform(-1, 1, size=(deg, deg))
            f = lambda x, y: np.polynomial.polynomial.polyval2d(x, y, c)
            got = interp_matrix(k, ell) @ f(src.points[:, 0], src.points[:, 1])
            want = f(dst.points[:, 0], dst.points[:, 1])
            assert np.allclose(got, want, atol=1e-12, rtol=0)

    def test_lebesgue_bound(self):
        # sup of the interpolant is bounded by Lambda_k^2 times the grid sup
        k = 7
        t = np.linspace(-1, 1, 401)
        basis_sum = np.zeros_like(t)
        for j in range(k):
            e = np.zeros(k)
            e[j] = 1.0
            basis_sum += np.abs(bary_eval(e, t))
        lam = basis_sum.max()
        rng = np.random.default_rng(99)
        xs, ys = np.meshgrid(t[::8], t[::8], indexing="ij")
        for _ in range(25):
            vals = rng.uniform(-1, 1, size=(k, k))
            interp_x = np.array([bary_eval(vals[:, j], t[::8]) for j in range(k)])
            sup = np.abs(np.array([bary_eval(interp_x[:, i], t[::8]) for i in range(len(t[::8]))])).max()
            assert sup <= lam**2 * np.abs(vals).max() * (1 + 1e-12)


class TestBaryEval:
    def test_reproduces_nodal_values_exactly(self):
        rng = np.random.default_rng(3)
        for k in (2, 5, 7, 12):
            vals = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            got = bary_eval(vals, cheb_nodes(k))
            assert np.array_equal(got, vals)

    def test_linear_midpoint(self):
        assert bary_eval(np.array([0.0, 1.0]), 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_cubic_at_point(self):
        # t^3 - t at 0.3 is -0.273; degree 3 < 7 so interpolation is exact
        t = cheb_nodes(7)
        vals = t**3 - t
        assert bary_eval(vals, 0.3) == pytest.approx(-0.273, abs=1e-13)

    def test_scalar_and_array_agree(self):
        vals = np.sin(cheb_nodes(9))
        ts = np.array([-0.9, -0.2, 0.0, 0.4, 1.0])
        arr = bary_eval(vals, ts)
        for t, v in zip(ts, arr):
            assert bary_eval(vals, t) == v

    def test_interval_mapping(self):
        # interpolate x^2 on [0, 4]; nodes are physical there
        g = tensor_grid(9, Rectangle(0.0, 4.0, 0.0, 1.0))
        vals = g.xs**2
        assert bary_eval(vals, 3.0, interval=(0.0, 4.0)) == pytest.approx(9.0, abs=1e-12)


class TestChebCoeffs:
    def test_constant(self):
        c = cheb_coeffs(np.ones(6))
        assert c[0] == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(c[1:])) <= 1e-14

    def test_identity_is_t1(self):
        c = cheb_coeffs(cheb_nodes(8))
        assert c[1] == pytest.approx(1.0, abs=1e-14)
        c[1] = 0.0
        assert np.max(np.abs(c)) <= 1e-14

    def test_t3_on_k5(self):
        x = cheb_nodes(5)
        c = cheb_coeffs(4 * x**3 - 3 * x)
        assert c[3] == pytest.approx(1.0, abs=1e-14)
        c[3] = 0.0
        assert np.max(np.abs(c)) <= 1e-14

    def test_roundtrip_with_bary(self):
        rng = np.random.default_rng(11)
        for k in (4, 7, 12):
            vals = rng.standard_normal(k)
            c = cheb_coeffs(vals)
            t = np.linspace(-1, 1, 37)
            direct = bary_eval(vals, t)
            synth = np.polynomial.chebyshev.chebval(t, c)
            assert np.allclose(direct, synth, atol=1e-12, rtol=0)


class TestRectangle:
    def test_children_order(self):
        r = Rectangle(0.0, 2.0, 0.0, 4.0)
        sw, se, nw, ne = r.children()
        assert sw == Rectangle(0.0, 1.0, 0.0, 2.0)
        assert se == Rectangle(1.0, 2.0, 0.0, 2.0)
        assert nw == Rectangle(0.0, 1.0, 2.0, 4.0)
        assert ne == Rectangle(1.0, 2.0, 2.0, 4.0)

    def test_children_tile_parent(self):
        r = Rectangle(-0.3, 1.7, 0.2, 0.9)
        kids = r.children()
        assert sum(c.area for c in kids) == pytest.approx(r.area, rel=1e-15)

    @pytest.mark.parametrize("bad", [(1.0, 1.0, 0.0, 1.0), (0.0, 1.0, 2.0, 1.0), (0.0, np.inf, 0.0, 1.0), (np.nan, 1.0, 0.0, 1.0)])
    def test_invalid_rejected(self, bad):
        with pytest.raises(ValueError):
            Rectangle(*bad)
