import math

import numpy as np
import pytest

from rlam.sketch import SketchSpec, random_test_matrix

MASK = (1 << 64) - 1


def splitmix_words(seed, count):
    """Independent SplitMix64 stream in Python integers."""
    out = []
    for i in range(1, count + 1):
        z = (seed + i * 0x9E3779B97F4A7C15) & MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def to_unit(z):
    return ((z >> 11) + 0.5) / 2.0**53


def test_uniform_matches_reference_stream(backend):
    M = random_test_matrix(5, 3, SketchSpec("uniform", seed=42))
    ref = [2.0 * to_unit(z) - 1.0 for z in splitmix_words(42, 15)]
    assert np.array_equal(M.ravel(), ref)


def test_rademacher_matches_reference_stream(backend):
    M = random_test_matrix(4, 4, SketchSpec("rademacher", seed=2**64 - 1))
    ref = [1.0 if z >> 63 else -1.0 for z in splitmix_words(2**64 - 1, 16)]
    assert np.array_equal(M.ravel(), ref)


def test_normal_matches_box_muller(backend):
    M = random_test_matrix(3, 2, SketchSpec(seed=7))
    w = splitmix_words(7, 6)
    ref = []
    for a, b in zip(w[::2], w[1::2]):
        r = math.sqrt(-2.0 * math.log(to_unit(a)))
        ref += [r * math.cos(2 * math.pi * to_unit(b)), r * math.sin(2 * math.pi * to_unit(b))]
    assert np.allclose(M.ravel(), ref, rtol=1e-14, atol=1e-15)


def test_odd_count_normal_is_prefix_of_even():
    a = random_test_matrix(3, 1, SketchSpec(seed=3)).ravel()
    b = random_test_matrix(4, 1, SketchSpec(seed=3)).ravel()
    assert np.array_equal(a, b[:3])


def test_row_major_fill_shares_prefix():
    a = random_test_matrix(4, 3, SketchSpec(seed=9)).ravel()
    b = random_test_matrix(6, 2, SketchSpec(seed=9)).ravel()
    assert np.array_equal(a, b)


def test_seed_determinism_and_variation():
    s = SketchSpec(seed=5)
    assert np.array_equal(random_test_matrix(20, 4, s), random_test_matrix(20, 4, s))
    assert not np.array_equal(random_test_matrix(20, 4, s), random_test_matrix(20, 4, SketchSpec(seed=6)))


@pytest.mark.parametrize("dist,mean,var", [("normal", 0.0, 1.0), ("uniform", 0.0, 1 / 3), ("rademacher", 0.0, 1.0)])
def test_moments(dist, mean, var):
    x = random_test_matrix(20000, 5, SketchSpec(dist, seed=1)).ravel()
    n = x.size
    assert abs(x.mean() - mean) <= 5 * math.sqrt(var / n)
    assert x.var() == pytest.approx(var, rel=0.02)


def test_ranges():
    u = random_test_matrix(1000, 3, SketchSpec("uniform"))
    assert u.min() > -1.0 and u.max() < 1.0
    r = random_test_matrix(1000, 3, SketchSpec("rademacher"))
    assert set(np.unique(r)) == {-1.0, 1.0}


def test_spec_aliases_and_defaults():
    s = SketchSpec()
    assert (s.distribution, s.seed, s.p, s.q, s.scheme) == ("normal", 0, 10, 2, "subspace")
    assert SketchSpec("unif").distribution == "uniform"
    assert SketchSpec("gaussian").distribution == "normal"


@pytest.mark.parametrize("kwargs", [
    {"distribution": "cauchy"},
    {"scheme": "krylov"},
    {"seed": -1},
    {"seed": 2**64},
    {"p": -1},
    {"q": -2},
])
def test_spec_rejects(kwargs):
    with pytest.raises(ValueError):
        SketchSpec(**kwargs)


def test_test_matrix_shape_checks():
    with pytest.raises(ValueError):
        random_test_matrix(3, 4)
    with pytest.raises(ValueError):
        random_test_matrix(3, 0)
