"""Seeded random test matrices.

Entries come from a SplitMix64 stream: the i-th 64-bit word (i = 1, 2, ...)
is ``mix(seed + i * 0x9E3779B97F4A7C15)``, where ``mix`` is the usual
xor-shift/multiply finalizer.  A word ``z`` maps to ``u = ((z >> 11) + 0.5)
/ 2**53`` in the open interval (0, 1).

* ``normal``: Box-Muller on consecutive word pairs, ``sqrt(-2 ln u1)``
  times ``cos(2 pi u2)`` then ``sin(2 pi u2)``.
* ``uniform``: ``2u - 1``.
* ``rademacher``: +1 when the top bit of the word is set, else -1.

Entries fill the n x l matrix in row-major order.  Results are identical
for identical ``(n, l, spec)`` within a build; they are not promised to
match other implementations bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend

DISTRIBUTIONS = {"normal": 0, "uniform": 1, "rademacher": 2}
_ALIASES = {"unif": "uniform", "gaussian": "normal"}
SCHEMES = ("direct", "subspace", "normalized")


@dataclass(frozen=True)
class SketchSpec:
    """How to draw and refine a sketch.

    ``p`` is the oversampling, ``q`` the number of power iterations and
    ``scheme`` the power-iteration variant (``direct``, ``subspace`` or
    ``normalized``).
    """

    distribution: str = "normal"
    seed: int = 0
    p: int = 10
    q: int = 2
    scheme: str = "subspace"

    def __post_init__(self):
        dist = _ALIASES.get(self.distribution, self.distribution)
        if dist not in DISTRIBUTIONS:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; "
                f"expected one of {sorted(DISTRIBUTIONS)}"
            )
        object.__setattr__(self, "distribution", dist)
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown power scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.p < 0 or self.q < 0:
            raise ValueError(f"p and q must be nonnegative, got p={self.p}, q={self.q}")


def random_test_matrix(n, l, spec=None):
    """Draw an ``n x l`` matrix with i.i.d. entries per ``spec``."""
    spec = spec or SketchSpec()
    if l < 1 or n < l:
        raise ValueError(f"need n >= l >= 1 for a test matrix, got n={n}, l={l}")
    flat = _backend.kernels().random_fill(int(spec.seed), n * l, DISTRIBUTIONS[spec.distribution])
    return flat.reshape(n, l)
