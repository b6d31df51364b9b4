"""Randomized principal component analysis."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .densemat import ShapeError, as_matrix
from .rsvd import rsvd, svd_truncated
from .sketch import SketchSpec

# above this many columns the full covariance trace is not stored
TOTAL_VARIANCE_MAX_COLS = 10000


@dataclass(frozen=True)
class PcaModel:
    """A fitted PCA.

    Attributes
    ----------
    rotation : ndarray, shape (n, k)
        Eigenvectors of the sample covariance, one per column.
    eigvals : ndarray, shape (k,)
        Eigenvalues, descending.
    sdev : ndarray, shape (k,)
        ``sqrt(eigvals)``.
    scores : ndarray, shape (m, k) or None
        Principal component scores of the training rows.
    center, scale : ndarray, shape (n,) or None
        The column means and standard deviations applied at fit time.
    total_variance : float or None
        Trace of the sample covariance of the processed data, when known.
    """

    rotation: np.ndarray
    eigvals: np.ndarray
    sdev: np.ndarray
    scores: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None
    scale: Optional[np.ndarray] = None
    total_variance: Optional[float] = None

    @property
    def k(self):
        return self.rotation.shape[1]

    @property
    def partial_denominator(self):
        """True when explained variance is relative to the retained eigenvalues only."""
        return self.total_variance is None


def center_scale(X, center=True, scale=True):
    """Center and/or scale the columns of X.

    Scaling divides by the sample standard deviation (denominator m - 1)
    of the already-centered columns.

    Returns
    -------
    (Xp, means, sds)
        ``means``/``sds`` are None when the corresponding step was skipped.
    """
    X = as_matrix(X, "X")
    m = X.shape[0]
    if m < 2:
        raise ShapeError("need at least two rows")
    Xp = X.copy()
    means = sds = None
    if center:
        means = Xp.mean(axis=0)
        Xp -= means
    if scale:
        sds = Xp.std(axis=0, ddof=1)
        bad = np.flatnonzero(sds == 0.0)
        if bad.size:
            raise ValueError(f"column {bad[0]} has zero variance and cannot be scaled")
        Xp /= sds
    return Xp, means, sds


def rpca(X, k, center=True, scale=True, retx=True, spec=None, rand=True):
    """Randomized PCA of the rows of X.

    Parameters
    ----------
    X : array_like, shape (m, n)
        One observation per row.
    k : int
        Number of components, ``1 <= k <= min(m - 1, n)``.
    center, scale : bool
        Preprocess columns (see :func:`center_scale`).
    retx : bool
        Keep the scores ``Z = U diag(s)``.
    spec : SketchSpec, optional
        Sketch parameters passed to :func:`rlam.rsvd.rsvd`.
    rand : bool
        Use the randomized SVD; False uses the deterministic truncated SVD.

    Returns
    -------
    PcaModel
    """
    Xp, means, sds = center_scale(X, center, scale)
    m, n = Xp.shape
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= min(m - 1, n):
        raise ValueError(f"k must be an integer in [1, {min(m - 1, n)}], got {k!r}")
    U, d, V = rsvd(Xp, k, spec or SketchSpec()) if rand else svd_truncated(Xp, k)
    eigvals = d * d / (m - 1)
    total = None
    if n <= TOTAL_VARIANCE_MAX_COLS:
        total = float(np.einsum("ij,ij->", Xp, Xp)) / (m - 1)
    return PcaModel(
        rotation=V,
        eigvals=eigvals,
        sdev=np.sqrt(eigvals),
        scores=U * d if retx else None,
        center=means,
        scale=sds,
        total_variance=total,
    )


def pca_transform(model, Xnew):
    """Project new rows onto the principal axes using the fit-time preprocessing."""
    Xnew = as_matrix(Xnew, "Xnew")
    n = model.rotation.shape[0]
    if Xnew.shape[1] != n:
        raise ShapeError(f"model expects {n} columns, got {Xnew.shape[1]}")
    if model.center is not None:
        Xnew = Xnew - model.center
    if model.scale is not None:
        Xnew = Xnew / model.scale
    return Xnew @ model.rotation


def whiten(model):
    """Loadings ``W diag(sqrt(eigvals))`` and unit-variance scores.

    Returns
    -------
    (loadings, scores_white)
        ``scores_white`` is None when the model kept no scores.
    """
    if np.any(model.eigvals <= 0.0):
        i = int(np.flatnonzero(model.eigvals <= 0.0)[0])
        raise ValueError(f"component {i} has zero variance and cannot be whitened")
    root = np.sqrt(model.eigvals)
    loadings = model.rotation * root
    white = model.scores / root if model.scores is not None else None
    return loadings, white


def explained_variance(model):
    """Proportion and cumulative proportion of variance per component.

    The denominator is the total variance of the processed data when the
    model stores it, otherwise the sum of the retained eigenvalues (see
    ``PcaModel.partial_denominator``).
    """
    total = model.total_variance
    if total is None:
        total = float(model.eigvals.sum())
    if total <= 0.0:
        prop = np.zeros_like(model.eigvals)
    else:
        prop = model.eigvals / total
    return prop, np.cumsum(prop)
