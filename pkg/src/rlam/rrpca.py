"""Robust PCA ``A = L + S`` by inexact augmented Lagrange multipliers.

L is low rank and S is sparse.  Each iteration needs a truncated SVD,
which is randomized while the predicted rank stays below ``min(m, n)/4``
and deterministic otherwise.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from .densemat import as_matrix
from .rsvd import rsvd, svd_truncated
from .sketch import SketchSpec, random_test_matrix

MU_GROWTH = 1.5
MU_CAP = 1e7
RANK_GROWTH = 0.05
NORM_STEPS = 30


class NumericalError(ArithmeticError):
    """An iterate became non-finite."""

    def __init__(self, iteration):
        super().__init__(f"non-finite iterate at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class IalmParams:
    """Solver settings.

    ``lam`` defaults to ``max(m, n) ** -0.5`` when None.  ``rand`` selects
    the randomized inner SVD, drawn per ``spec`` with the seed advanced by
    the iteration number.
    """

    lam: Optional[float] = None
    maxiter: int = 50
    tol: float = 1e-5
    rand: bool = True
    spec: SketchSpec = field(default_factory=SketchSpec)

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.maxiter < 1:
            raise ValueError(f"maxiter must be at least 1, got {self.maxiter}")


class IalmStep(NamedTuple):
    iteration: int
    residual: float
    k: int
    l: int
    mu: float


@dataclass
class RpcaResult:
    L: np.ndarray
    S: np.ndarray
    iterations: int
    converged: bool
    trace: List[IalmStep]


def soft_threshold(M, tau):
    """Entrywise shrinkage ``sign(x) * max(|x| - tau, 0)``."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    M = np.asarray(M, dtype=np.float64)
    return np.sign(M) * np.maximum(np.abs(M) - tau, 0.0)


def predict_rank(d, mu_inv, k, minmn):
    """Next target rank from the current singular values.

    ``l`` counts the values above ``mu_inv`` (at least 1).  The target
    shrinks to ``l + 1`` when fewer than ``k`` survive, otherwise grows by
    5% of ``minmn``.
    """
    l = max(int(np.count_nonzero(np.asarray(d) > mu_inv)), 1)
    if l < k:
        k_next = l + 1
    else:
        k_next = l + math.ceil(RANK_GROWTH * minmn)
    return min(k_next, minmn), l


def spectral_norm_estimate(A, steps=NORM_STEPS, seed=0):
    """Largest singular value from power iteration on ``A^T A``."""
    A = as_matrix(A)
    x = random_test_matrix(A.shape[1], 1, SketchSpec(seed=seed))[:, 0]
    est = 0.0
    for _ in range(steps):
        x /= np.linalg.norm(x)
        y = A @ x
        est = float(np.linalg.norm(y))
        if est == 0.0:
            return 0.0
        x = A.T @ y
    return est


def dual_norm(A, lam, spectral=None):
    """``max(||A||_2, ||A||_max / lam)``.

    Pass ``spectral`` to reuse an already computed ``||A||_2``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    A = as_matrix(A)
    if spectral is None:
        spectral = spectral_norm_estimate(A)
    return max(spectral, float(np.abs(A).max()) / lam)


def rrpca(A, params=None):
    """Split A into a low-rank part L and a sparse part S.

    Iterates until ``||A - L - S||_F / ||A||_F <= params.tol`` or
    ``params.maxiter`` iterations have run; ``RpcaResult.converged`` tells
    which.  Raises :class:`NumericalError` if an iterate turns non-finite.
    """
    A = as_matrix(A)
    params = params or IalmParams()
    m, n = A.shape
    minmn = min(m, n)
    norm_f = float(np.linalg.norm(A))
    if norm_f == 0.0:
        raise ValueError("input matrix is zero")
    lam = params.lam if params.lam is not None else max(m, n) ** -0.5

    norm2 = spectral_norm_estimate(A, seed=params.spec.seed)
    mu = 1.25 / norm2
    mu_max = MU_CAP * mu
    Z = A / dual_norm(A, lam, norm2)
    S = np.zeros_like(A)
    L = S
    k = min(2, minmn)
    trace = []
    converged = False
    it = 0
    for it in range(1, params.maxiter + 1):
        M = A - S + Z / mu
        if params.rand and k <= minmn / 4:
            spec = dataclasses.replace(params.spec, seed=(params.spec.seed + it) % 2**64)
            U, d, V = rsvd(M, k, spec)
        else:
            U, d, V = svd_truncated(M, k)
        k, l = predict_rank(d, 1.0 / mu, k, minmn)
        shrunk = np.maximum(d[:l] - 1.0 / mu, 0.0)
        L = (U[:, :l] * shrunk) @ V[:, :l].T
        S = soft_threshold(A - L + Z / mu, lam / mu)
        R = A - L - S
        Z += mu * R
        res = float(np.linalg.norm(R)) / norm_f
        if not (math.isfinite(res) and np.isfinite(Z).all()):
            raise NumericalError(it)
        trace.append(IalmStep(it, res, k, l, mu))
        mu = min(MU_GROWTH * mu, mu_max)
        if res <= params.tol:
            converged = True
            break
    return RpcaResult(L, S, it, converged, trace)
