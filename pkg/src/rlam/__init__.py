"""Randomized low-rank matrix decompositions.

Randomized SVD, PCA, robust PCA, interpolative and CUR decompositions
built on a shared sketch-and-project QB engine.  Hot kernels (Householder
QR, one-sided Jacobi SVD, pivoted LU, random test matrices) run in a
compiled extension when available and in numpy otherwise; see
:mod:`rlam._backend`.
"""

__version__ = "0.1.0"

from ._backend import active as active_backend, available as available_backends, use_backend
from .densemat import NonFiniteError, ShapeError
from .detfact import ConvergenceError, pinv, qr_economy, qr_pivoted, svd_dense
from .idcur import CurFactors, IdFactors, id_deterministic, rcur, rid
from .matio import read_matrix, write_matrix
from .rpca import PcaModel, center_scale, explained_variance, pca_transform, rpca, whiten
from .rqb import QbFactors, power_direct, power_normalized, power_subspace, rqb
from .rrpca import IalmParams, RpcaResult, rrpca, soft_threshold
from .rsvd import TruncatedSvd, expected_error_bound, nrmse, rsvd, svd_truncated
from .sketch import SketchSpec, random_test_matrix
from .synth import SpectrumProfile, gen_decaying, gen_lowrank, gen_lowrank_plus_sparse

__all__ = [
    "ConvergenceError", "CurFactors", "IalmParams", "IdFactors", "NonFiniteError",
    "PcaModel", "QbFactors", "RpcaResult", "ShapeError", "SketchSpec", "SpectrumProfile",
    "TruncatedSvd", "active_backend", "available_backends", "center_scale",
    "expected_error_bound", "explained_variance", "gen_decaying", "gen_lowrank",
    "gen_lowrank_plus_sparse", "id_deterministic", "nrmse", "pca_transform", "pinv",
    "power_direct", "power_normalized", "power_subspace", "qr_economy", "qr_pivoted",
    "random_test_matrix", "read_matrix", "rcur", "rid", "rpca", "rqb", "rrpca", "rsvd",
    "soft_threshold", "svd_dense", "svd_truncated", "use_backend", "whiten", "write_matrix",
]
