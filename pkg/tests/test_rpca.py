import importlib

import numpy as np
import pytest

from oracles import planted, sym3_eigvals
from rlam.densemat import ShapeError
from rlam.rpca import PcaModel, center_scale, explained_variance, pca_transform, rpca, whiten
from rlam.sketch import SketchSpec

rpca_mod = importlib.import_module("rlam.rpca")

rng = np.random.default_rng(41)


def test_center_hand_case():
    Xp, means, sds = center_scale([[1.0], [3.0]], center=True, scale=False)
    assert np.array_equal(Xp, [[-1.0], [1.0]])
    assert np.array_equal(means, [2.0])
    assert sds is None


def test_center_zero_mean_unchanged():
    X = np.array([[1.0, -2.0], [-1.0, 2.0]])
    assert np.array_equal(center_scale(X, scale=False)[0], X)


def test_center_scale_moments():
    X = rng.standard_normal((50, 4)) * [1.0, 10.0, 0.1, 3.0] + 7.0
    Xp, means, sds = center_scale(X)
    assert np.allclose(Xp.mean(axis=0), 0.0, atol=1e-12)
    assert np.allclose(Xp.var(axis=0, ddof=1), 1.0)
    assert np.allclose(means, X.mean(axis=0))


def test_zero_variance_column_named():
    X = np.column_stack([rng.standard_normal(5), np.full(5, 2.0)])
    with pytest.raises(ValueError, match="column 1"):
        center_scale(X)
    center_scale(X, scale=False)


def test_single_row_rejected():
    with pytest.raises(ShapeError):
        center_scale(np.ones((1, 3)))


def test_dominant_direction():
    t = rng.standard_normal(500)
    X = np.column_stack([t, 2 * t]) + 1e-3 * rng.standard_normal((500, 2))
    m = rpca(X, 2, scale=False)
    assert m.eigvals[0] / m.eigvals.sum() >= 0.99


def test_eigvals_match_cubic_oracle(backend):
    X = rng.standard_normal((40, 3)) @ rng.standard_normal((3, 3))
    m = rpca(X, 3, scale=False, spec=SketchSpec(p=0))
    Xc = X - X.mean(axis=0)
    C = Xc.T @ Xc / (X.shape[0] - 1)
    assert np.allclose(m.eigvals, sym3_eigvals(C), rtol=0, atol=1e-8)
    assert np.allclose(m.sdev ** 2, m.eigvals)


def test_model_invariants():
    X = rng.standard_normal((60, 8)) @ rng.standard_normal((8, 8))
    m = rpca(X, 5)
    assert np.allclose(m.rotation.T @ m.rotation, np.eye(5), atol=1e-8)
    assert np.all(np.diff(m.eigvals) <= 0) and np.all(m.eigvals >= 0)
    Xp = center_scale(X)[0]
    assert np.abs(m.scores - Xp @ m.rotation).max() <= 1e-10
    assert rpca(X, 5, retx=False).scores is None


def test_scores_uncorrelated_and_total_variance():
    X = rng.standard_normal((80, 5)) @ rng.standard_normal((5, 5))
    m = rpca(X, 5, scale=False)
    cov = np.cov(m.scores, rowvar=False)
    off = cov - np.diag(np.diag(cov))
    assert np.abs(off).max() <= 1e-6 * np.trace(cov)
    trace = np.trace(np.cov(X, rowvar=False))
    assert abs(m.eigvals.sum() - trace) <= 1e-8 * trace
    prop, cum = explained_variance(m)
    assert cum[-1] == pytest.approx(1.0, abs=1e-12)


def test_transform_reproduces_scores_and_center():
    X = rng.standard_normal((30, 4)) + 3.0
    m = rpca(X, 3)
    assert np.abs(pca_transform(m, X) - m.scores).max() <= 1e-10
    mc = rpca(X, 3, scale=False)
    assert np.abs(pca_transform(mc, mc.center[None, :])).max() <= 1e-12
    with pytest.raises(ShapeError):
        pca_transform(m, np.ones((2, 5)))


def test_transform_hand_rotation():
    c, s = np.cos(0.3), np.sin(0.3)
    R = np.array([[c, -s], [s, c]])
    m = PcaModel(rotation=R, eigvals=np.array([2.0, 1.0]), sdev=np.sqrt([2.0, 1.0]))
    out = pca_transform(m, [[1.0, 2.0]])
    assert np.allclose(out, [[1.0 * c + 2.0 * s, -1.0 * s + 2.0 * c]])


def test_transform_held_out_variance():
    W = rng.standard_normal((4, 4))
    X = rng.standard_normal((2000, 4)) @ W
    m = rpca(X, 4, scale=False)
    held = pca_transform(m, rng.standard_normal((1000, 4)) @ W)
    ratio = held.var(axis=0, ddof=1) / m.eigvals
    assert np.all(np.abs(ratio - 1.0) <= 0.2)


def test_whiten_properties():
    X = rng.standard_normal((120, 4)) @ rng.standard_normal((4, 4))
    m = rpca(X, 4, scale=False)
    L, Zw = whiten(m)
    assert np.allclose(np.cov(Zw, rowvar=False), np.eye(4), atol=1e-6)
    assert np.allclose((L ** 2).sum(axis=0), m.eigvals, rtol=0, atol=1e-10 * m.eigvals[0])
    assert np.allclose(L @ L.T, np.cov(X, rowvar=False), atol=1e-8 * m.eigvals[0])
    assert whiten(rpca(X, 2, retx=False))[1] is None


def test_whiten_rejects_zero_variance():
    m = PcaModel(rotation=np.eye(2), eigvals=np.array([1.0, 0.0]), sdev=np.array([1.0, 0.0]))
    with pytest.raises(ValueError, match="component 1"):
        whiten(m)


def test_explained_variance_hand_cases():
    m = PcaModel(rotation=np.eye(2), eigvals=np.array([3.0, 1.0]), sdev=np.sqrt([3.0, 1.0]))
    prop, cum = explained_variance(m)
    assert np.allclose(prop, [0.75, 0.25]) and np.allclose(cum, [0.75, 1.0])
    assert m.partial_denominator
    single = PcaModel(rotation=np.ones((1, 1)), eigvals=np.array([4.0]), sdev=np.array([2.0]))
    assert explained_variance(single)[0][0] == 1.0


def test_truncated_model_uses_full_total():
    X = rng.standard_normal((50, 6))
    m = rpca(X, 2, scale=False)
    prop, _ = explained_variance(m)
    assert not m.partial_denominator
    assert prop.sum() < 1.0
    assert m.total_variance == pytest.approx(np.trace(np.cov(X, rowvar=False)))


def test_wide_data_flags_partial_denominator(monkeypatch):
    monkeypatch.setattr(rpca_mod, "TOTAL_VARIANCE_MAX_COLS", 3)
    m = rpca(rng.standard_normal((10, 5)), 2)
    assert m.partial_denominator
    assert explained_variance(m)[1][-1] == pytest.approx(1.0)


def test_randomized_matches_deterministic():
    sigma = np.arange(1, 41, dtype=float) ** -2.0
    X = planted(200, 40, sigma, seed=9)
    a = rpca(X, 8, scale=False)
    b = rpca(X, 8, scale=False, rand=False)
    assert np.all(np.abs(a.eigvals - b.eigvals) <= 1e-3 * b.eigvals)


@pytest.mark.parametrize("k", [0, 5, 4.0])
def test_rejects_invalid_k(k):
    with pytest.raises(ValueError):
        rpca(rng.standard_normal((5, 8)), k)
