"""Deterministic factorizations: economy and pivoted QR, Jacobi SVD, pinv.

The heavy lifting happens in the kernel backend (see ``rlam._backend``);
this module validates inputs, picks the tall orientation, and applies the
sign and ordering conventions:

* QR: diagonal of R is nonnegative.
* SVD: singular values descending; in every column of V the entry of
  largest magnitude (first one on ties) is nonnegative.
"""

from typing import NamedTuple, Optional

import numpy as np

from . import _backend
from .densemat import ShapeError, as_matrix

EPS = np.finfo(np.float64).eps
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 30


class QrFactors(NamedTuple):
    Q: np.ndarray
    R: np.ndarray
    pivots: Optional[np.ndarray] = None


class SvdFactors(NamedTuple):
    U: np.ndarray
    d: np.ndarray
    V: np.ndarray


class ConvergenceError(ArithmeticError):
    """Jacobi sweeps hit the cap before all pair cosines fell below tol."""

    def __init__(self, sweeps, off):
        super().__init__(
            f"Jacobi SVD did not converge in {sweeps} sweeps "
            f"(largest off-diagonal cosine {off:.3e})"
        )
        self.sweeps = sweeps
        self.off = off


def qr_economy(A):
    """Economy QR ``A = Q R`` with ``r = min(m, n)`` and ``diag(R) >= 0``.

    Rank-deficient input is allowed and shows up as zeros on the diagonal
    of R.
    """
    A = as_matrix(A, check_finite=False)
    r = min(A.shape)
    Q, R, _ = _backend.kernels().householder_qr(A, False, r, r, 0.0)
    return QrFactors(Q, R, None)


def qr_pivoted(A, steps=None):
    """Householder QR with greedy max-norm column pivoting.

    Returns ``QrFactors(Q, S, P)`` with ``A[:, P] = Q @ S``.  When
    ``steps`` is given the elimination stops after that many reflections:
    Q is m x steps, S is the leading steps x n block, and P's first
    ``steps`` entries equal those of the full run.
    """
    A = as_matrix(A, check_finite=False)
    r = min(A.shape)
    if steps is None:
        steps = r
    if not 0 <= steps <= r:
        raise ValueError(f"steps must lie in [0, {r}], got {steps}")
    Q, R, piv = _backend.kernels().householder_qr(A, True, steps, steps, 0.0)
    return QrFactors(Q, R, piv)


def lu_lower(A):
    """Unit-lower factor of partial-pivoting LU with the row permutation folded in."""
    return _backend.kernels().lu_lower(as_matrix(A, check_finite=False))


def orthonormal_complement(Q, total):
    """Columns completing the orthonormal columns of ``Q`` (m x r) to ``total``."""
    m, r = Q.shape
    C, _, _ = _backend.kernels().householder_qr(Q, False, r, total, 0.0)
    return C[:, r:total]


def _fix_signs(U, V):
    rows = np.argmax(np.abs(V), axis=0)
    flip = V[rows, np.arange(V.shape[1])] < 0.0
    U[:, flip] *= -1.0
    V[:, flip] *= -1.0


def _svd_tall(A, tol, max_sweeps):
    kern = _backend.kernels()
    m, n = A.shape
    # rank-revealing pivoted QR first; columns left below roundoff are null
    colmax = float(np.sqrt(np.einsum("ij,ij->j", A, A).max()))
    Q, R, piv = kern.householder_qr(A, True, n, n, max(m, n) * EPS * colmax)
    r = R.shape[0]

    d = np.zeros(n)
    right = np.empty((n, n))
    U = np.empty((m, n))
    Ux = np.zeros((n, 0))
    if r:
        # R = Vx diag(d) Ux^T, so A[:, piv] = (Q Vx) diag(d) Ux^T
        Ux, dr, Vx, sweeps, off = kern.jacobi_svd(np.ascontiguousarray(R.T), tol, max_sweeps)
        if off > tol:
            raise ConvergenceError(sweeps, off)
        d[:r] = dr
        U[:, :r] = Q[:, :r] @ Vx
        right[:, :r] = Ux
    if r < n:
        U[:, r:] = Q[:, r:n]
        right[:, r:] = orthonormal_complement(Ux, n)
    V = np.empty((n, n))
    V[piv] = right
    return U, d, V


def svd_dense(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS, method="jacobi"):
    """Economy SVD ``A = U diag(d) V^T`` with ``r = min(m, n)`` terms.

    Parameters
    ----------
    A : array_like, shape (m, n)
    tol : float
        Jacobi stopping threshold on the pair cosines.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`ConvergenceError`.
    method : {"jacobi", "lapack"}
        ``jacobi`` (default) runs rank-revealing pivoted QR followed by
        one-sided Jacobi on the triangular factor, using this package's
        kernels.  ``lapack`` delegates to ``numpy.linalg.svd`` and is kept
        as a reference baseline for benchmarks.

    Returns
    -------
    SvdFactors
        U (m x r), d (r,) descending, V (n x r).
    """
    A = as_matrix(A, check_finite=False)
    m, n = A.shape
    if method == "lapack":
        U, d, Vt = np.linalg.svd(A, full_matrices=False)
        U, V = np.ascontiguousarray(U), np.ascontiguousarray(Vt.T)
    elif method == "jacobi":
        if m >= n:
            U, d, V = _svd_tall(A, tol, max_sweeps)
        else:
            V, d, U = _svd_tall(np.ascontiguousarray(A.T), tol, max_sweeps)
    else:
        raise ValueError(f"unknown SVD method {method!r}")
    order = np.argsort(-d, kind="stable")
    U, d, V = U[:, order], d[order], V[:, order]
    _fix_signs(U, V)
    return SvdFactors(U, d, V)


def pinv(A, rtol=None):
    """Moore-Penrose pseudoinverse via :func:`svd_dense`.

    Singular values at or below ``rtol * d_max`` are treated as zero;
    ``rtol`` defaults to ``max(m, n) * eps``.
    """
    A = as_matrix(A, check_finite=False)
    if rtol is None:
        rtol = max(A.shape) * EPS
    U, d, V = svd_dense(A)
    keep = d > rtol * d[0] if d[0] > 0 else np.zeros_like(d, dtype=bool)
    return (V[:, keep] / d[keep]) @ U[:, keep].T


def solve_upper(T, B):
    """Back-substitution for ``T X = B`` with T square upper triangular."""
    T = as_matrix(T, "T", check_finite=False)
    B = np.array(B, dtype=np.float64, ndmin=2)
    k = T.shape[0]
    if T.shape[1] != k or B.shape[0] != k:
        raise ShapeError(f"need square T and matching B, got {T.shape} and {B.shape}")
    X = np.empty_like(B)
    for i in range(k - 1, -1, -1):
        X[i] = (B[i] - T[i, i + 1:] @ X[i + 1:]) / T[i, i]
    return X
