"""Parity tests between the compiled kernels and the numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest

from oscquad import _kernels
from oscquad.cheb import cheb_nodes, diff_matrix

HAVE_NUMBA = "numba" in _kernels.available_backends()

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend unavailable")


def fiber_batch(nf=40, k=7, seed=0):
    rng = np.random.default_rng(seed)
    D = diff_matrix(k)
    xs = cheb_nodes(k)
    freqs = rng.uniform(20.0, 400.0, (nf, 1))
    gv = np.ascontiguousarray(freqs * xs[None, :] + rng.uniform(-1, 1, (nf, 1)))
    fv = np.ascontiguousarray(
        rng.standard_normal((nf, k)) + 1j * rng.standard_normal((nf, k))
    )
    return D, gv, fv


@needs_numba
class TestKernelParity:
    def test_tsvd(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((9, 6)) + 1j * rng.standard_normal((9, 6))
        b = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(be.tsvd(np.ascontiguousarray(A, dtype=np.complex128), np.ascontiguousarray(b, dtype=np.complex128), 1e-12))
        x0, r0, smax0, smin0, res0 = outs[0]
        x1, r1, smax1, smin1, res1 = outs[1]
        assert r0 == r1
        np.testing.assert_allclose(x0, x1, atol=1e-12)
        assert smax0 == pytest.approx(smax1, rel=1e-12)
        assert res0 == pytest.approx(res1, rel=1e-10, abs=1e-13)

    def test_rrqr(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(be.rrqr(np.ascontiguousarray(A, dtype=np.complex128), np.ascontiguousarray(b, dtype=np.complex128), 1e-13))
        assert outs[0][1] == outs[1][1]
        np.testing.assert_allclose(outs[0][0], outs[1][0], atol=1e-11)

    def test_solve_fibers(self):
        D, gv, fv = fiber_batch()
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(be.solve_fibers(D, gv, fv, 0.5, 5e-13, 0, False, 1e-15, 400))
        p0, r0 = outs[0]
        p1, r1 = outs[1]
        np.testing.assert_array_equal(r0, r1)
        np.testing.assert_allclose(p0, p1, atol=1e-11)

    def test_levin_fixed_batch(self):
        D, gv, fv = fiber_batch(seed=5)
        scales = np.full(gv.shape[0], 0.37)
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(
                be.levin_fixed_batch(D, gv, fv, scales, 5e-13, 0, False, 1e-15, 400)
            )
        np.testing.assert_allclose(outs[0], outs[1], atol=1e-12)

    def test_gauss_tensor_batch(self):
        rng = np.random.default_rng(6)
        m, n = 5, 10
        fv = np.ascontiguousarray(
            rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))
        )
        gv = np.ascontiguousarray(rng.uniform(0, 50, (m, n, n)))
        from oscquad.oracle import gauss_rule

        w = np.ascontiguousarray(gauss_rule(n).weights)
        jacs = np.ascontiguousarray(rng.uniform(0.1, 1.0, m))
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(be.gauss_tensor_batch(fv, gv, w, jacs))
        np.testing.assert_allclose(outs[0], outs[1], rtol=1e-13, atol=1e-13)

    def test_diag_iter(self):
        rng = np.random.default_rng(8)
        k = 7
        D = diff_matrix(k)
        gdiag = np.ascontiguousarray(1j * 1e5 * np.ones(k, dtype=np.complex128))
        b = np.ascontiguousarray(rng.standard_normal(k) + 1j * rng.standard_normal(k))
        outs = []
        for name in ("numpy", "numba"):
            be = _kernels.available_backends()[name]
            outs.append(be.diag_iter(D, gdiag, b, 1e-15, 400))
        p0, s0, it0 = outs[0]
        p1, s1, it1 = outs[1]
        assert s0 == s1 == 0
        np.testing.assert_allclose(p0, p1, atol=1e-18)


@needs_numba
class TestEndToEnd:
    def test_adaptive_value_parity(self):
        from oscquad.adapt import adaptive_integrate
        from oscquad.catalog import get_entry

        F = get_entry("saddle").make(30.0)
        previous = _kernels.active().name
        try:
            _kernels.use_backend("numpy")
            a = adaptive_integrate(F)
            _kernels.use_backend("numba")
            b = adaptive_integrate(F)
        finally:
            _kernels.use_backend(previous)
        assert abs(a.value - b.value) <= 1e-11
        assert len(a.mesh) == len(b.mesh)


class TestSelection:
    def test_switch_and_restore(self):
        previous = _kernels.active().name
        try:
            _kernels.use_backend("numpy")
            assert _kernels.active().name == "numpy"
        finally:
            _kernels.use_backend(previous)
        assert _kernels.active().name == previous

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            _kernels.use_backend("fortran")

    def test_env_flag_disables_compilation(self):
        env = dict(os.environ, OSCQUAD_DISABLE_NUMBA="1")
        code = (
            "from oscquad import _kernels; "
            "print(sorted(_kernels.available_backends()), _kernels.active().name)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0
        assert out.stdout.strip() == "['numpy'] numpy"
