import math

import numpy as np
import pytest

from oracles import singular_values
from rlam.synth import SpectrumProfile, gen_decaying, gen_lowrank, gen_lowrank_plus_sparse


def test_lowrank_numerical_rank():
    s = singular_values(gen_lowrank(50, 40, 5, seed=1))
    assert s[5] / s[0] <= 1e-12
    assert s[4] / s[0] > 1e-6


def test_lowrank_seeded():
    assert np.array_equal(gen_lowrank(10, 8, 3, seed=4), gen_lowrank(10, 8, 3, seed=4))
    assert not np.array_equal(gen_lowrank(10, 8, 3, seed=4), gen_lowrank(10, 8, 3, seed=5))


def test_lowrank_full_rank():
    s = singular_values(gen_lowrank(12, 9, 9, seed=2))
    assert s[-1] / s[0] > 1e-8


def test_lowrank_rejects_rank():
    with pytest.raises(ValueError):
        gen_lowrank(5, 4, 5)
    with pytest.raises(ValueError):
        gen_lowrank(5, 4, 0)


def test_sparse_density():
    A, L0, S0 = gen_lowrank_plus_sparse(300, 300, 5, 0.2, 500.0, seed=3)
    n = 300 * 300
    count = np.count_nonzero(S0)
    assert abs(count - 0.2 * n) <= 3 * math.sqrt(n * 0.2 * 0.8)
    assert np.abs(S0).max() <= 500.0
    assert np.array_equal(A, L0 + S0)
    assert np.array_equal(L0, gen_lowrank(300, 300, 5, seed=3))


def test_sparse_zero_amplitude():
    A, L0, S0 = gen_lowrank_plus_sparse(20, 15, 2, 0.3, 0.0, seed=1)
    assert not S0.any()
    assert np.array_equal(A, L0)


@pytest.mark.parametrize("density", [0.0, 1.0, -0.1])
def test_sparse_rejects_density(density):
    with pytest.raises(ValueError):
        gen_lowrank_plus_sparse(5, 5, 1, density)


@pytest.mark.parametrize("profile", [
    SpectrumProfile("power_decay", 1.5),
    SpectrumProfile("exp_decay", 0.3),
    SpectrumProfile("exact_rank", r=4),
])
def test_planted_spectrum_recovered(profile):
    A = gen_decaying(40, 30, profile, seed=6)
    planted = profile.singular_values(30)
    s = singular_values(A)
    assert np.all(np.abs(s - planted) <= 1e-8 * planted[0])


def test_flat_and_steep_profiles():
    s = singular_values(gen_decaying(20, 15, SpectrumProfile("power_decay", 0.0), seed=1))
    assert np.allclose(s, 1.0)
    s = singular_values(gen_decaying(20, 15, SpectrumProfile("exp_decay", 50.0), seed=1))
    assert s[1] / s[0] <= 1e-15


def test_decaying_noise_and_determinism():
    p = SpectrumProfile(noise=0.1)
    a, b = gen_decaying(10, 10, p, seed=2), gen_decaying(10, 10, p, seed=2)
    assert np.array_equal(a, b)
    assert not np.allclose(a, gen_decaying(10, 10, SpectrumProfile(), seed=2))


@pytest.mark.parametrize("kwargs", [{"kind": "step"}, {"rate": -1.0}, {"noise": -1.0}, {"kind": "exact_rank"}])
def test_profile_validation(kwargs):
    with pytest.raises(ValueError):
        SpectrumProfile(**kwargs)


def test_exact_rank_profile_too_large():
    with pytest.raises(ValueError):
        SpectrumProfile("exact_rank", r=20).singular_values(10)
