"""Dense double-precision matrix helpers.

Matrices are plain 2-D ``numpy.ndarray`` objects of dtype float64 in
row-major order.  Everything here returns fresh arrays; nothing hands out
views of its inputs.
"""

import numpy as np

NORM_KINDS = ("frobenius", "spectral", "maxabs", "l1elem")


class ShapeError(ValueError):
    """Operand dimensions are incompatible."""


class NonFiniteError(ValueError):
    """Input holds NaN or Inf entries."""


def as_matrix(A, name="A", check_finite=True):
    """Coerce ``A`` to a C-contiguous float64 2-D array.

    Copies only when dtype or layout require it.
    """
    M = np.ascontiguousarray(A, dtype=np.float64)
    if M.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {M.shape}")
    if M.shape[0] < 1 or M.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and column, got {M.shape}")
    if check_finite and not np.isfinite(M).all():
        raise NonFiniteError(f"{name} contains non-finite entries")
    return M


def index_set(idx, bound, name="idx"):
    """Validate a sequence of distinct zero-based indices below ``bound``."""
    out = np.asarray(idx, dtype=np.intp).ravel()
    if out.size and (out.min() < 0 or out.max() >= bound):
        raise IndexError(f"{name} has entries outside [0, {bound})")
    if np.unique(out).size != out.size:
        raise IndexError(f"{name} has duplicate entries")
    return out


def matmul(A, B):
    A = as_matrix(A, "A", check_finite=False)
    B = as_matrix(B, "B", check_finite=False)
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply A {A.shape} by B {B.shape}")
    return A @ B


def transpose(A):
    return np.ascontiguousarray(as_matrix(A, check_finite=False).T)


def norm(A, kind="frobenius"):
    """Matrix norm.

    ``kind`` is one of ``frobenius``, ``spectral`` (largest singular value),
    ``maxabs`` (largest entry magnitude) or ``l1elem`` (sum of entry
    magnitudes).
    """
    A = as_matrix(A, check_finite=False)
    if kind == "frobenius":
        return float(np.sqrt(np.einsum("ij,ij->", A, A)))
    if kind == "spectral":
        from .detfact import svd_dense

        return float(svd_dense(A).d[0])
    if kind == "maxabs":
        return float(np.abs(A).max())
    if kind == "l1elem":
        return float(np.abs(A).sum())
    raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")


def select(A, idx, axis="columns"):
    """Gather columns or rows of ``A`` in the order given by ``idx``."""
    A = as_matrix(A, check_finite=False)
    if axis == "columns":
        return np.ascontiguousarray(A[:, index_set(idx, A.shape[1])])
    if axis == "rows":
        return np.ascontiguousarray(A[index_set(idx, A.shape[0]), :])
    raise ValueError(f"axis must be 'columns' or 'rows', got {axis!r}")


def combine(alpha, A, beta, B):
    """Entrywise ``alpha * A + beta * B``."""
    A = as_matrix(A, "A", check_finite=False)
    B = as_matrix(B, "B", check_finite=False)
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: A {A.shape} vs B {B.shape}")
    return alpha * A + beta * B
