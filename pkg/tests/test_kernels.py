"""The compiled kernels and their numpy twins must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from rlam import _backend, _pykernels

compiled = pytest.mark.skipif("compiled" not in _backend.available(), reason="extension not built")
rng = np.random.default_rng(3)


def _ck():
    return _backend._BACKENDS["compiled"]


@compiled
@pytest.mark.parametrize("dist", [1, 2])
def test_random_fill_bitwise(dist):
    assert np.array_equal(_ck().random_fill(99, 1001, dist), _pykernels.random_fill(99, 1001, dist))


@compiled
def test_random_fill_normal_close():
    a = _ck().random_fill(5, 1001, 0)
    b = _pykernels.random_fill(5, 1001, 0)
    assert np.allclose(a, b, rtol=4e-16 * 8, atol=1e-15)


@compiled
@pytest.mark.parametrize("pivoting", [False, True])
def test_householder_qr_agrees(pivoting):
    A = rng.standard_normal((13, 9))
    Qa, Ra, pa = _ck().householder_qr(A, pivoting, 9, 9, 0.0)
    Qb, Rb, pb = _pykernels.householder_qr(A, pivoting, 9, 9, 0.0)
    assert np.array_equal(pa, pb)
    assert np.allclose(Qa, Qb, atol=1e-12)
    assert np.allclose(Ra, Rb, atol=1e-12)


@compiled
def test_householder_qr_early_stop_agrees():
    A = rng.standard_normal((10, 3)) @ rng.standard_normal((3, 8))
    stop = 1e-10 * np.linalg.norm(A, axis=0).max()
    Ra = _ck().householder_qr(A, True, 8, 8, stop)[1]
    Rb = _pykernels.householder_qr(A, True, 8, 8, stop)[1]
    assert Ra.shape[0] == Rb.shape[0] == 3


@compiled
def test_jacobi_agrees():
    A = rng.standard_normal((20, 12))
    Ua, da, Va, sa, _ = _ck().jacobi_svd(A, 1e-12, 30)
    Ub, db, Vb, sb, _ = _pykernels.jacobi_svd(A, 1e-12, 30)
    assert np.allclose(np.sort(da), np.sort(db), rtol=1e-12)
    for U, d, V in ((Ua, da, Va), (Ub, db, Vb)):
        assert np.allclose((U * d) @ V.T, A, atol=1e-12)


@compiled
def test_lu_lower_agrees():
    A = rng.standard_normal((11, 6))
    assert np.allclose(_ck().lu_lower(A), _pykernels.lu_lower(A), atol=1e-13)


def test_use_backend_restores():
    before = _backend.active()
    with _backend.use_backend("python"):
        assert _backend.active() == "python"
        assert _backend.kernels() is _pykernels
    assert _backend.active() == before
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


def test_pure_python_env_switch():
    env = dict(os.environ, RLAM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import rlam; print(rlam.active_backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
