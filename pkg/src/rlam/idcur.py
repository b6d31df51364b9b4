"""Interpolative (ID) and CUR decompositions.

The column ID writes ``A ~= C Z`` where C holds k actual columns of A and
Z contains the k x k identity at the selected positions.  The row ID is
the column ID of ``A^T``.  CUR picks both columns and rows:
``A ~= C U R``.
"""

from typing import NamedTuple, Optional

import numpy as np

from .densemat import as_matrix
from .detfact import pinv, qr_pivoted, solve_upper
from .rqb import check_target_rank, rqb
from .sketch import SketchSpec

# relative size of the smallest diagonal entry below which pinv replaces back-substitution
TRIANGULAR_RCOND = 1e-12
MODES = ("col", "row")


class IdFactors(NamedTuple):
    """``skeleton`` is C (m x k) in column mode, R (k x n) in row mode.

    ``Z`` is k x n (column mode) or m x k (row mode).  Both are None when
    only the indices were requested.
    """

    skeleton: Optional[np.ndarray]
    Z: Optional[np.ndarray]
    idx: np.ndarray
    mode: str = "col"


class CurFactors(NamedTuple):
    C: Optional[np.ndarray]
    U: Optional[np.ndarray]
    R: Optional[np.ndarray]
    col_idx: np.ndarray
    row_idx: np.ndarray


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _column_id(A, k, idx_only):
    """Pivots and interpolation matrix for a column ID of A."""
    n = A.shape[1]
    _, S, piv = qr_pivoted(A, steps=k)
    J = piv[:k].copy()
    if idx_only:
        return J, None
    S11, S12 = S[:, :k], S[:, k:]
    diag = np.abs(np.diag(S11))
    if diag.min() > TRIANGULAR_RCOND * diag.max():
        T = solve_upper(S11, S12)
    else:
        T = pinv(S11) @ S12
    Z = np.zeros((k, n))
    Z[:, piv[:k]] = np.eye(k)
    Z[:, piv[k:]] = T
    return J, Z


def id_deterministic(A, k, mode="col", idx_only=False):
    """Interpolative decomposition via truncated pivoted QR.

    Parameters
    ----------
    A : array_like, shape (m, n)
    k : int
        Number of columns (or rows) kept.
    mode : {"col", "row"}
    idx_only : bool
        Return only the selected indices.
    """
    _check_mode(mode)
    A = as_matrix(A)
    check_target_rank(k, *A.shape)
    work = A if mode == "col" else np.ascontiguousarray(A.T)
    J, Z = _column_id(work, k, idx_only)
    return _assemble(A, J, Z, mode, idx_only)


def _assemble(A, J, Z, mode, idx_only):
    if idx_only:
        return IdFactors(None, None, J, mode)
    if mode == "col":
        return IdFactors(np.ascontiguousarray(A[:, J]), Z, J, mode)
    return IdFactors(np.ascontiguousarray(A[J, :]), np.ascontiguousarray(Z.T), J, mode)


def rid(A, k, mode="col", spec=None, idx_only=False):
    """Randomized ID: column ID of the small factor B from a QB decomposition.

    Indices and Z come from B; the skeleton is taken from A itself.
    """
    _check_mode(mode)
    A = as_matrix(A)
    check_target_rank(k, *A.shape)
    work = A if mode == "col" else np.ascontiguousarray(A.T)
    B = rqb(work, k, spec or SketchSpec()).B
    J, Z = _column_id(B, k, idx_only)
    return _assemble(A, J, Z, mode, idx_only)


def rcur(A, k, spec=None, rand=True, idx_only=False):
    """CUR decomposition ``A ~= C U R``.

    A column ID (randomized when ``rand``) picks the columns; a pivoted QR
    of ``C^T`` picks the rows.  ``U = Z pinv(R)``.
    """
    A = as_matrix(A)
    check_target_rank(k, *A.shape)
    if rand:
        cid = rid(A, k, "col", spec)
    else:
        cid = id_deterministic(A, k, "col")
    C, Z, J = cid.skeleton, cid.Z, cid.idx
    _, _, rpiv = qr_pivoted(np.ascontiguousarray(C.T), steps=k)
    I = rpiv[:k].copy()
    if idx_only:
        return CurFactors(None, None, None, J, I)
    R = np.ascontiguousarray(A[I, :])
    return CurFactors(C, Z @ pinv(R), R, J, I)
