"""Randomized and deterministic truncated SVD."""

import logging
import math
import warnings
from typing import NamedTuple

import numpy as np

from .densemat import as_matrix
from .detfact import svd_dense
from .rqb import check_target_rank, rqb
from .sketch import SketchSpec

log = logging.getLogger(__name__)


class TruncatedSvd(NamedTuple):
    U: np.ndarray
    d: np.ndarray
    V: np.ndarray

    @property
    def nu(self):
        return self.U.shape[1]

    @property
    def nv(self):
        return self.V.shape[1]


def _vector_counts(k, nu, nv):
    out = []
    for name, c in (("nu", nu), ("nv", nv)):
        if c is None:
            c = k
        elif c < 0:
            raise ValueError(f"{name} must be nonnegative, got {c}")
        elif c > k:
            warnings.warn(f"{name}={c} exceeds k={k}; returning {k} vectors", RuntimeWarning, stacklevel=3)
            c = k
        out.append(c)
    return out


def rsvd(A, k, spec=None, nu=None, nv=None):
    """Randomized rank-k SVD.

    Builds a QB decomposition, takes the economy SVD of the small factor B
    and lifts its left singular vectors back with Q.

    Parameters
    ----------
    A : array_like, shape (m, n)
    k : int
        Target rank, ``1 <= k <= min(m, n)``.
    spec : SketchSpec, optional
        Test-matrix distribution, seed, oversampling ``p`` (default 10) and
        power iterations ``q`` (default 2).
    nu, nv : int, optional
        Number of left/right singular vectors to return (default k).

    Returns
    -------
    TruncatedSvd
        ``U`` (m x nu), ``d`` (k,), ``V`` (n x nv).
    """
    A = as_matrix(A)
    spec = spec or SketchSpec()
    m, n = A.shape
    check_target_rank(k, m, n)
    nu, nv = _vector_counts(k, nu, nv)
    if k >= min(m, n) / 4:
        log.info("rsvd: k=%d is not below min(m, n)/4=%g; a deterministic SVD may be as fast", k, min(m, n) / 4)
    if m < n:
        Vt, d, Ut = _rsvd_tall(np.ascontiguousarray(A.T), k, spec)
        return TruncatedSvd(Ut[:, :nu], d, Vt[:, :nv])
    U, d, V = _rsvd_tall(A, k, spec)
    return TruncatedSvd(U[:, :nu], d, V[:, :nv])


def _rsvd_tall(A, k, spec):
    Q, B = rqb(A, k, spec)
    Ub, d, V = svd_dense(B)
    return Q @ Ub[:, :k], d[:k].copy(), np.ascontiguousarray(V[:, :k])


def svd_truncated(A, k, nu=None, nv=None):
    """Deterministic rank-k SVD: full economy SVD, then keep the top k terms."""
    A = as_matrix(A)
    check_target_rank(k, *A.shape)
    nu, nv = _vector_counts(k, nu, nv)
    U, d, V = svd_dense(A)
    return TruncatedSvd(U[:, :nu].copy(), d[:k].copy(), V[:, :nv].copy())


def reconstruct(U, d, V):
    """``U diag(d) V^T`` using as many terms as all three factors share."""
    r = min(U.shape[1], d.shape[0], V.shape[1])
    return (U[:, :r] * d[:r]) @ V[:, :r].T


def expected_error_bound(k, p, q, m, n, sigma_kplus1):
    """Expected spectral error bound of the randomized rank-k approximation.

    ``[1 + sqrt(k/(p-1)) + e sqrt(k+p)/p * sqrt(min(m,n) - k)]^(1/(2q+1))``
    times the (k+1)-th singular value; valid for a Gaussian test matrix
    and ``p >= 2``.
    """
    if p < 2:
        raise ValueError(f"the bound needs oversampling p >= 2, got {p}")
    if q < 0:
        raise ValueError(f"q must be nonnegative, got {q}")
    bracket = 1.0 + math.sqrt(k / (p - 1)) + math.e * math.sqrt(k + p) / p * math.sqrt(min(m, n) - k)
    return bracket ** (1.0 / (2 * q + 1)) * sigma_kplus1


def nrmse(A, A_hat):
    """Normalized root mean squared error ``sqrt(sum (A - A_hat)^2 / sum A^2)``."""
    A = np.asarray(A, dtype=np.float64)
    diff = A - np.asarray(A_hat, dtype=np.float64)
    return float(np.sqrt(np.sum(diff * diff) / np.sum(A * A)))
