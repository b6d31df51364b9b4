"""Seeded synthetic test matrices."""

from dataclasses import dataclass

import numpy as np

PROFILE_KINDS = ("exact_rank", "power_decay", "exp_decay")


@dataclass(frozen=True)
class SpectrumProfile:
    """Planted singular values.

    * ``exact_rank``: ``r`` ones followed by zeros.
    * ``power_decay``: ``sigma_j = j ** -rate``.
    * ``exp_decay``: ``sigma_j = exp(-rate * j)``.

    ``noise`` adds that multiple of an i.i.d. standard normal matrix.
    """

    kind: str = "power_decay"
    rate: float = 1.0
    r: int = 0
    noise: float = 0.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {PROFILE_KINDS}")
        if self.rate < 0 or self.noise < 0:
            raise ValueError("rate and noise must be nonnegative")
        if self.kind == "exact_rank" and self.r < 1:
            raise ValueError("exact_rank profile needs r >= 1")

    def singular_values(self, count):
        j = np.arange(1, count + 1, dtype=np.float64)
        if self.kind == "power_decay":
            return j ** -self.rate
        if self.kind == "exp_decay":
            return np.exp(-self.rate * j)
        if self.r > count:
            raise ValueError(f"rank {self.r} exceeds min(m, n) = {count}")
        return (j <= self.r).astype(np.float64)


def gen_lowrank(m, n, r, seed=0):
    """Product of m x r and r x n standard normal factors (rank r almost surely)."""
    if not 1 <= r <= min(m, n):
        raise ValueError(f"rank r must lie in [1, {min(m, n)}], got {r}")
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def gen_lowrank_plus_sparse(m, n, r, density=0.2, amplitude=500.0, seed=0):
    """Low-rank matrix plus sparse corruption.

    Each entry of S0 is nonzero with probability ``density`` and then drawn
    from uniform(-amplitude, amplitude).

    Returns
    -------
    (A, L0, S0)
    """
    if not 0.0 < density < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    L0 = gen_lowrank(m, n, r, seed)
    # separate stream so L0 matches gen_lowrank for the same seed
    rng = np.random.default_rng([seed, 1])
    support = rng.random((m, n)) < density
    values = rng.uniform(-amplitude, amplitude, (m, n))
    S0 = np.where(support, values, 0.0)
    return L0 + S0, L0, S0


def _orthonormal(rng, rows, cols):
    Q, R = np.linalg.qr(rng.standard_normal((rows, cols)))
    return Q * np.sign(np.diag(R))


def gen_decaying(m, n, profile=None, seed=0):
    """``U diag(sigma) V^T`` with random orthonormal U, V and sigma from ``profile``."""
    profile = profile or SpectrumProfile()
    c = min(m, n)
    rng = np.random.default_rng(seed)
    U = _orthonormal(rng, m, c)
    V = _orthonormal(rng, n, c)
    A = (U * profile.singular_values(c)) @ V.T
    if profile.noise:
        A += profile.noise * rng.standard_normal((m, n))
    return A
