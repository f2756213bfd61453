"""The i.i.d.-uniform reference model.

Uniform points in [0,1) are the pseudo-randomness benchmark the lacunary
statistics are compared against: window counts are Binomial(N, L/N), the
pair correlation averages to (1 - 1/N) L, and k-level correlations to
C_k(N) L^{k-1}.

PRNG: PCG64 (O'Neill's permuted congruential generator, as shipped by
numpy) seeded through SeedSequence(entropy=seed, spawn_key=(stream,)).
Both the bit stream and the uint64 -> [0,1) conversion are fixed,
platform-independent algorithms, so a (seed, stream) pair reproduces the
same points byte-for-byte anywhere.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .sequences import FracPointSet


@dataclass(frozen=True)
class RngSpec:
    """Seed plus stream index; distinct streams are independent generators."""

    seed: int = 0
    stream: int = 0

    def generator(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


def iid_points(n, rng):
    """N sorted i.i.d. uniform [0,1) points from the pinned PRNG.

    `rng` is an RngSpec (or an already-built numpy Generator, for callers
    that draw several sets from one stream).  alpha is tagged None: the
    random model has no sequence parameter.
    """
    if n < 1:
        raise OutOfRange("iid_points requires n >= 1")
    gen = rng.generator() if isinstance(rng, RngSpec) else rng
    return FracPointSet.from_values(gen.random(n), alpha=None)


def binomial_variance_reference(n, l):
    """Exact finite-N number variance of the i.i.d. model: L (1 - L/N)."""
    if not 0 < l < n:
        raise OutOfRange("binomial_variance_reference requires 0 < L < N")
    return l * (1.0 - l / n)
