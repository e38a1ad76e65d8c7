"""Chebyshev grids, spectral differentiation and interpolation.

Everything here works on the extrema (Chebyshev-Lobatto) grid of k points,
stored in ascending order so that nodes[0] = -1 and nodes[-1] = +1 exactly.
Matrices are built once per k, cached, and returned readonly; callers that
need to mutate must copy.

Two-dimensional objects use the tensor grid of k^2 points ordered with the
x index fastest: point i + k*j is (nodes[i], nodes[j]).  The 2D operators
(differentiation in x, interpolation between grid sizes) are Kronecker
products of the 1D ones under exactly this ordering, which is why the
ordering is part of the public contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import Rectangle


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def cheb_nodes(k: int) -> np.ndarray:
    """Ascending Chebyshev extrema cos((k-j)*pi/(k-1)), j = 1..k.

    Computed as sin(pi*(2i-(k-1))/(2(k-1))) for i = 0..k-1, which is the
    same set but with exact endpoints and exact symmetry nodes[i] =
    -nodes[k-1-i] in floating point.

    Parameters
    ----------
    k : int
        Number of nodes, at least 2.

    Returns
    -------
    ndarray, shape (k,)
        Readonly array of nodes in [-1, 1].
    """
    if k < 2:
        raise ValueError(f"need at least 2 nodes, got k={k}")
    i = np.arange(k)
    return _readonly(np.sin(np.pi * (2 * i - (k - 1)) / (2 * (k - 1))))


@lru_cache(maxsize=None)
def bary_weights(k: int) -> np.ndarray:
    """Barycentric weights for the k-point extrema grid: (-1)^i, halved at the ends."""
    if k < 2:
        raise ValueError(f"need at least 2 nodes, got k={k}")
    w = np.ones(k)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return _readonly(w)


@lru_cache(maxsize=None)
def diff_matrix(k: int) -> np.ndarray:
    """Spectral differentiation matrix on the k-point extrema grid.

    Maps nodal values of a polynomial of degree < k to nodal values of its
    derivative.  Off-diagonal entries come from the barycentric form,
    D[i, j] = (w[j]/w[i]) / (x[i] - x[j]); diagonal entries are the negated
    row sums, which makes D annihilate constants exactly.

    Returns
    -------
    ndarray, shape (k, k)
        Readonly matrix.
    """
    x = cheb_nodes(k)
    w = bary_weights(k)
    with np.errstate(divide="ignore", invalid="ignore"):
        D = (w[None, :] / w[:, None]) / (x[:, None] - x[None, :])
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return _readonly(D)


@lru_cache(maxsize=None)
def interp_matrix_1d(k: int, ell: int) -> np.ndarray:
    """Matrix mapping values on the ell-point grid to values on the k-point grid.

    Row i evaluates the degree-<ell interpolant at target node i of the
    k-point grid.  Targets that coincide with a source node bit-for-bit get a
    unit row, so interp_matrix_1d(k, k) is exactly the identity.
    """
    targets = cheb_nodes(k)
    src = cheb_nodes(ell)
    w = bary_weights(ell)
    P = np.empty((k, ell))
    for i, t in enumerate(targets):
        diff = t - src
        hit = np.nonzero(diff == 0.0)[0]
        if hit.size:
            row = np.zeros(ell)
            row[hit[0]] = 1.0
        else:
            row = w / diff
            row /= row.sum()
        P[i] = row
    return _readonly(P)


@lru_cache(maxsize=None)
def interp_matrix(k: int, ell: int) -> np.ndarray:
    """Tensor-grid interpolation matrix, shape (k^2, ell^2).

    Maps values on the ell x ell tensor grid (x index fastest) to values on
    the k x k tensor grid under the same ordering.  Equals the Kronecker
    product of the 1D matrix with itself: the left factor acts on the slow
    (y) index, the right factor on the fast (x) index.
    """
    P1 = interp_matrix_1d(k, ell)
    return _readonly(np.kron(P1, P1))


@lru_cache(maxsize=None)
def diff_matrix_x(k: int) -> np.ndarray:
    """Tensor-grid x-differentiation matrix I_k kron D_k, shape (k^2, k^2)."""
    return _readonly(np.kron(np.eye(k), diff_matrix(k)))


def bary_eval(values: np.ndarray, t, interval: tuple[float, float] | None = None):
    """Evaluate the Chebyshev interpolant of nodal values at point(s) t.

    Uses the second barycentric form with the closed-form extrema weights,
    so the result reproduces nodal values exactly when t hits a node.

    Parameters
    ----------
    values : ndarray, shape (k,)
        Nodal values on the k-point extrema grid (real or complex).
    t : float or ndarray
        Evaluation point(s).  In reference coordinates [-1, 1] unless
        `interval` is given, in which case t is affinely mapped from
        [interval[0], interval[1]] onto [-1, 1] first.

    Returns
    -------
    scalar or ndarray matching the shape of t.
    """
    values = np.asarray(values)
    k = values.shape[0]
    x = cheb_nodes(k)
    w = bary_weights(k)
    t_arr = np.asarray(t, dtype=float)
    if interval is not None:
        a, b = interval
        t_arr = (2.0 * t_arr - (a + b)) / (b - a)
    diff = t_arr[..., None] - x
    exact = diff == 0.0
    # Substitute 1 where t hits a node to keep the division finite, then
    # overwrite those results with the nodal values.
    ratios = w / np.where(exact, 1.0, diff)
    # Reduce with .sum along the node axis in both the scalar and the array
    # case so the two paths round identically.
    num = (ratios * values).sum(axis=-1)
    den = ratios.sum(axis=-1)
    out = num / den
    if exact.any():
        idx = exact.argmax(axis=-1)
        out = np.where(exact.any(axis=-1), values[idx], out)
    if np.isscalar(t) or np.ndim(t) == 0:
        return out[()]
    return out


@lru_cache(maxsize=None)
def _coeff_matrix(k: int) -> np.ndarray:
    # DCT-I style analysis matrix: coeffs = C @ values for values on the
    # ascending extrema grid, with the usual halving of the first/last terms
    # and of the first/last coefficients.
    j = np.arange(k)
    theta = (k - 1 - j) * np.pi / (k - 1)
    m = np.arange(k)
    C = np.cos(np.outer(m, theta)) * (2.0 / (k - 1))
    C[:, 0] *= 0.5
    C[:, -1] *= 0.5
    C[0] *= 0.5
    C[-1] *= 0.5
    return _readonly(C)


def cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients c with sum_m c[m] T_m interpolating the nodal values.

    Parameters
    ----------
    values : ndarray, shape (k,)
        Nodal values on the ascending k-point extrema grid.

    Returns
    -------
    ndarray, shape (k,)
        Coefficients in the Chebyshev basis T_0 .. T_{k-1}.
    """
    values = np.asarray(values)
    return _coeff_matrix(values.shape[0]) @ values


@dataclass(frozen=True)
class TensorGrid:
    """k x k tensor product Chebyshev grid on a rectangle.

    `points[i + k*j]` is (xs[i], ys[j]): the x index runs fastest, matching
    the Kronecker ordering of `diff_matrix_x` and `interp_matrix`.
    """

    k: int
    rect: Rectangle
    xs: np.ndarray
    ys: np.ndarray
    points: np.ndarray


def tensor_grid(k: int, rect: Rectangle) -> TensorGrid:
    """Build the k x k tensor grid of Chebyshev extrema on `rect`."""
    t = cheb_nodes(k)
    # Convex-combination form keeps the endpoints exactly a, b, c, d.
    xs = _readonly(0.5 * (rect.a * (1.0 - t) + rect.b * (1.0 + t)))
    ys = _readonly(0.5 * (rect.c * (1.0 - t) + rect.d * (1.0 + t)))
    points = _readonly(np.column_stack([np.tile(xs, k), np.repeat(ys, k)]))
    return TensorGrid(k=k, rect=rect, xs=xs, ys=ys, points=points)
