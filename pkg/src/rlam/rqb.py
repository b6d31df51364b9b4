"""Randomized QB decomposition ``A ~= Q B`` with power iterations."""

from typing import NamedTuple

import numpy as np

from .densemat import ShapeError, as_matrix
from .detfact import lu_lower, qr_economy
from .sketch import SketchSpec, random_test_matrix


class QbFactors(NamedTuple):
    Q: np.ndarray
    B: np.ndarray


def _check_power_args(A, Y, q):
    if Y.shape[0] != A.shape[0]:
        raise ShapeError(f"sketch has {Y.shape[0]} rows but A has {A.shape[0]}")
    if q < 0:
        raise ValueError(f"q must be nonnegative, got {q}")


def power_direct(A, Y, q):
    """Return ``(A A^T)^q Y`` by plain alternating products.

    Loses the trailing directions to round-off for even moderate ``q``;
    kept as the reference the stabilized schemes are checked against.
    """
    _check_power_args(A, Y, q)
    for _ in range(q):
        Y = A.T @ Y
        Y = A @ Y
    return Y


def power_subspace(A, Y, q):
    """Subspace iterations: re-orthonormalize after every product with A or A^T."""
    _check_power_args(A, Y, q)
    for _ in range(q):
        Q = qr_economy(Y).Q
        Q = qr_economy(A.T @ Q).Q
        Y = A @ Q
    return Y


def power_normalized(A, Y, q):
    """Power iterations normalized by the (permuted) lower factor of a pivoted LU.

    Cheaper than QR per step but slightly less accurate.
    """
    _check_power_args(A, Y, q)
    for _ in range(q):
        L = lu_lower(Y)
        L = lu_lower(A.T @ L)
        Y = A @ L
    return Y


POWER_SCHEMES = {
    "direct": power_direct,
    "subspace": power_subspace,
    "normalized": power_normalized,
}


def check_target_rank(k, m, n):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= min(m, n):
        raise ValueError(f"target rank k must be an integer in [1, {min(m, n)}], got {k!r}")


def rqb(A, k, spec=None):
    """Randomized QB decomposition.

    Draws an ``n x l`` test matrix with ``l = min(k + p, m, n)``, forms the
    sketch ``Y = A Omega``, refines it with ``spec.q`` iterations of
    ``spec.scheme``, and returns the orthonormal basis Q of Y together with
    ``B = Q^T A``.
    """
    A = as_matrix(A)
    spec = spec or SketchSpec()
    m, n = A.shape
    check_target_rank(k, m, n)
    l = min(k + spec.p, m, n)
    Y = A @ random_test_matrix(n, l, spec)
    Y = POWER_SCHEMES[spec.scheme](A, Y, spec.q)
    Q = qr_economy(Y).Q
    return QbFactors(Q, Q.T @ A)
