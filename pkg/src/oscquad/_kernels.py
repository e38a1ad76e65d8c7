"""Hot numeric kernels, JIT-compiled with numba when available.

The same source functions are built twice through `_build`: once undecorated
(the pure-numpy backend) and once under ``numba.njit(cache=True)``.  Setting
the environment variable ``OSCQUAD_DISABLE_NUMBA=1`` before import, or running
without numba installed, selects the numpy backend.  `use_backend` switches at
runtime (used by the backend benchmark and by tests); the switch is a module
global, so don't flip it concurrently with running integrations.

Kernel conventions:

- matrices are C-contiguous float64/complex128; fiber arrays are laid out
  fiber-major, ``gvals[j, i]`` = sample i along fiber j, so each fiber is a
  contiguous row;
- truncated solves return ``(x, rank, sigma_max, sigma_min_kept,
  residual_norm)``; rank 0 means every singular value (or R diagonal entry)
  fell below the threshold and the solution is identically zero;
- ``method`` selects the dense solver: 0 = truncated SVD, 1 = truncated
  column-pivoted QR.  The diagonal fixed-point iteration, when enabled, is
  attempted first and falls through to the dense solver if its gate fails.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

METHOD_SVD = 0
METHOD_RRQR = 1

# Gate for the diagonal iteration: contraction requires
# ||G^{-1}||_inf * ||D||_inf below this bound.
ITER_GATE = 0.5


def _build(jit):
    """Build the kernel namespace with `jit` applied to every function."""

    @jit
    def svd_apply(U, s, Vh, b, rank):
        # x = V_r S_r^{-1} U_r^H b in split real/imaginary lanes.  Complex
        # ufuncs may contract one lane's product into an FMA while rounding
        # the other's, which breaks exact power-of-two homogeneity in b;
        # real scalar arithmetic keeps the two lanes' rounding symmetric.
        m = U.shape[0]
        n = Vh.shape[1]
        x = np.zeros(n, dtype=np.complex128)
        for i in range(rank):
            cr = 0.0
            ci = 0.0
            for t in range(m):
                ur = U[t, i].real
                ui = U[t, i].imag
                br = b[t].real
                bi = b[t].imag
                cr += ur * br + ui * bi
                ci += ur * bi - ui * br
            wr = cr / s[i]
            wi = ci / s[i]
            for t in range(n):
                vr = Vh[i, t].real
                vi = Vh[i, t].imag
                x[t] += complex(wr * vr + wi * vi, wi * vr - wr * vi)
        return x

    @jit
    def tsvd(A, b, thresh):
        # Truncated-SVD minimum-norm solve of A x ~ b, keeping singular
        # values >= thresh.
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
        p = s.shape[0]
        rank = 0
        for i in range(p):
            if s[i] >= thresh:
                rank = i + 1
        x = svd_apply(U, s, Vh, b, rank)
        r = A @ x - b
        acc = 0.0
        for i in range(r.shape[0]):
            acc += r[i].real * r[i].real + r[i].imag * r[i].imag
        resid = np.sqrt(acc)
        smin_kept = s[rank - 1] if rank > 0 else 0.0
        smax = s[0] if p > 0 else 0.0
        return x, rank, smax, smin_kept, resid

    @jit
    def rrqr(A, b, thresh):
        # Householder QR with max-column-norm pivoting, truncated where the
        # R diagonal falls below thresh.  |R[j,j]| is nonincreasing under
        # this pivoting, so the kept set is a prefix.
        m, n = A.shape
        R = A.astype(np.complex128).copy()
        qtb = b.astype(np.complex128).copy()
        piv = np.arange(n)
        steps = min(m, n)
        rdiag = np.zeros(steps)
        for j in range(steps):
            # fresh column norms of the reduced matrix; matrices are small
            best = j
            bestnorm = -1.0
            for l in range(j, n):
                cn = 0.0
                for i in range(j, m):
                    cn += np.abs(R[i, l]) ** 2
                if cn > bestnorm:
                    bestnorm = cn
                    best = l
            if best != j:
                for i in range(m):
                    tmp = R[i, j]
                    R[i, j] = R[i, best]
                    R[i, best] = tmp
                pt = piv[j]
                piv[j] = piv[best]
                piv[best] = pt
            normx = np.sqrt(bestnorm)
            rdiag[j] = normx
            if normx == 0.0:
                continue
            # Householder vector v = x + phase(x0)*||x||*e1, normalized so
            # that v[0] = 1; applying I - tau v v^H zeroes the column below j.
            x0 = R[j, j]
            if np.abs(x0) > 0.0:
                phase = x0 / np.abs(x0)
            else:
                phase = 1.0 + 0.0j
            alpha = -phase * normx
            v = np.zeros(m - j, dtype=np.complex128)
            denom = x0 - alpha
            v[0] = 1.0
            for i in range(1, m - j):
                v[i] = R[j + i, j] / denom
            vsq = 0.0
            for i in range(m - j):
                vsq += np.abs(v[i]) ** 2
            # I - tau v v^H with tau = 2/||v||^2 is Hermitian unitary and
            # maps the pivot column onto alpha e1
            tau = 2.0 / vsq
            R[j, j] = alpha
            for i in range(1, m - j):
                R[j + i, j] = 0.0
            for l in range(j + 1, n):
                acc = 0.0 + 0.0j
                for i in range(m - j):
                    acc += np.conj(v[i]) * R[j + i, l]
                acc *= tau
                for i in range(m - j):
                    R[j + i, l] -= acc * v[i]
            acc = 0.0 + 0.0j
            for i in range(m - j):
                acc += np.conj(v[i]) * qtb[j + i]
            acc *= tau
            for i in range(m - j):
                qtb[j + i] -= acc * v[i]
        rank = 0
        for j in range(steps):
            if rdiag[j] >= thresh:
                rank = j + 1
            else:
                break
        x = np.zeros(n, dtype=np.complex128)
        if rank > 0:
            z = np.zeros(rank, dtype=np.complex128)
            for i in range(rank - 1, -1, -1):
                acc = qtb[i]
                for l in range(i + 1, rank):
                    acc -= R[i, l] * z[l]
                z[i] = acc / R[i, i]
            for i in range(rank):
                x[piv[i]] = z[i]
        r = A @ x - b
        acc2 = 0.0
        for i in range(r.shape[0]):
            acc2 += r[i].real * r[i].real + r[i].imag * r[i].imag
        resid = np.sqrt(acc2)
        rmin_kept = rdiag[rank - 1] if rank > 0 else 0.0
        rmax = rdiag[0] if steps > 0 else 0.0
        return x, rank, rmax, rmin_kept, resid

    @jit
    def diag_iter(D, gdiag, b, tol, max_iter):
        # Fixed-point iteration for (D + diag(gdiag)) p = b, contraction
        # G^{-1}(b - D p).  status: 0 converged, 1 gate failed, 2 max_iter.
        k = D.shape[0]
        Dc = D.astype(np.complex128)
        dnorm = 0.0
        for i in range(k):
            row = 0.0
            for j in range(k):
                row += np.abs(D[i, j])
            if row > dnorm:
                dnorm = row
        ginv_norm = 0.0
        for i in range(k):
            gi = np.abs(gdiag[i])
            if gi == 0.0:
                return np.zeros(k, dtype=np.complex128), 1, 0
            inv = 1.0 / gi
            if inv > ginv_norm:
                ginv_norm = inv
        if ginv_norm * dnorm > ITER_GATE:
            return np.zeros(k, dtype=np.complex128), 1, 0
        bnorm = 0.0
        for i in range(k):
            if np.abs(b[i]) > bnorm:
                bnorm = np.abs(b[i])
        p = np.zeros(k, dtype=np.complex128)
        stop = tol * bnorm
        for it in range(max_iter):
            q = (b - Dc @ p) / gdiag
            delta = 0.0
            for i in range(k):
                di = np.abs(q[i] - p[i])
                if di > delta:
                    delta = di
            p = q
            if delta <= stop:
                return p, 0, it + 1
        return p, 2, max_iter

    @jit
    def solve_fibers(
        D, gvals, fvals, scale, eps_rel, method, iter_enabled, iter_tol, iter_max
    ):
        # One collocation solve per fiber: A_j = D + i diag(D g_j),
        # A_j p_j = scale * f_j, truncation at eps_rel * |A_j|.
        nf, k = gvals.shape
        pvals = np.zeros((nf, k), dtype=np.complex128)
        ranks = np.zeros(nf, dtype=np.int64)
        for j in range(nf):
            gp = D @ gvals[j]
            rhs = scale * fvals[j].astype(np.complex128)
            if iter_enabled:
                gd = 1j * gp
                p, status, _ = diag_iter(D, gd, rhs, iter_tol, iter_max)
                if status == 0:
                    pvals[j] = p
                    ranks[j] = k
                    continue
            A = np.zeros((k, k), dtype=np.complex128)
            for i in range(k):
                for l in range(k):
                    A[i, l] = D[i, l]
                A[i, i] += 1j * gp[i]
            if method == METHOD_RRQR:
                # |R_11| equals the max column 2-norm, known before factoring
                maxcol = 0.0
                for l in range(k):
                    cn = 0.0
                    for i in range(k):
                        cn += A[i, l].real ** 2 + A[i, l].imag ** 2
                    if cn > maxcol:
                        maxcol = cn
                x, rank, _, _, _ = rrqr(A, rhs, eps_rel * np.sqrt(maxcol))
            else:
                U, s, Vh = np.linalg.svd(A, full_matrices=False)
                thresh = eps_rel * s[0]
                rank = 0
                for i in range(k):
                    if s[i] >= thresh:
                        rank = i + 1
                x = svd_apply(U, s, Vh, rhs, rank)
            pvals[j] = x
            ranks[j] = rank
        return pvals, ranks

    @jit
    def levin_fixed_batch(
        D, gvals, fvals, scales, eps_rel, method, iter_enabled, iter_tol, iter_max
    ):
        # Batched 1D Levin solves; row j is one interval with its own
        # half-width jacobian in scales[j], applied to the right-hand side.
        # Returns the antiderivative boundary combination
        # p(beta) e^{i g(beta)} - p(alpha) e^{i g(alpha)} per interval,
        # plus the solve ranks.
        nf, k = gvals.shape
        scaled = np.zeros((nf, k), dtype=np.complex128)
        for j in range(nf):
            for i in range(k):
                scaled[j, i] = scales[j] * fvals[j, i]
        pvals, ranks = solve_fibers(
            D, gvals, scaled, 1.0, eps_rel, method, iter_enabled, iter_tol, iter_max
        )
        values = np.zeros(nf, dtype=np.complex128)
        for j in range(nf):
            values[j] = pvals[j, k - 1] * np.exp(1j * gvals[j, k - 1]) - pvals[
                j, 0
            ] * np.exp(1j * gvals[j, 0])
        return values, ranks

    @jit
    def gauss_tensor_batch(fvals, gvals, w, jacs):
        # Weighted tensor sums sum_{il} w_i w_l f e^{i g} * jac per rectangle.
        m, n, _ = fvals.shape
        out = np.zeros(m, dtype=np.complex128)
        for r in range(m):
            acc = 0.0 + 0.0j
            for i in range(n):
                row = 0.0 + 0.0j
                for l in range(n):
                    row += w[l] * fvals[r, i, l] * np.exp(1j * gvals[r, i, l])
                acc += w[i] * row
            out[r] = acc * jacs[r]
        return out

    return SimpleNamespace(
        name="numpy",
        tsvd=tsvd,
        rrqr=rrqr,
        diag_iter=diag_iter,
        solve_fibers=solve_fibers,
        levin_fixed_batch=levin_fixed_batch,
        gauss_tensor_batch=gauss_tensor_batch,
    )


NUMPY_BACKEND = _build(lambda f: f)

_HAS_NUMBA = False
NUMBA_BACKEND = None
if os.environ.get("OSCQUAD_DISABLE_NUMBA", "0") != "1":
    try:
        import numba

        NUMBA_BACKEND = _build(lambda f: numba.njit(f, cache=True))
        NUMBA_BACKEND.name = "numba"
        _HAS_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via the env flag path
        pass

_active = NUMBA_BACKEND if NUMBA_BACKEND is not None else NUMPY_BACKEND


def active() -> SimpleNamespace:
    """The kernel backend integrations currently dispatch to."""
    return _active


def available_backends() -> dict[str, SimpleNamespace]:
    out = {"numpy": NUMPY_BACKEND}
    if NUMBA_BACKEND is not None:
        out["numba"] = NUMBA_BACKEND
    return out


def use_backend(name: str) -> SimpleNamespace:
    """Switch the active backend to "numpy" or "numba"; returns it."""
    global _active
    backends = available_backends()
    if name not in backends:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(backends)}")
    _active = backends[name]
    return _active
