"""Closed-form kernels and moment machinery.

Everything here is pure and reentrant: the tent kernel and its Fourier
transform, the k-dimensional tent, Stirling numbers of the second kind,
Poisson/normal moment tables and the normalized-Poisson MGF.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import DimensionTooLarge, OutOfRange

STIRLING_MAX_ORDER = 30
DELTA_K_MAX_DIM = 8

# Below this the direct sin^2(pi x)/(pi x)^2 form loses digits to cancellation;
# the even Taylor series agrees with it to 1e-14 at the threshold.
_TENT_HAT_SERIES_CUTOFF = 1e-4


def tent(t):
    """Tent kernel max{1 - |t|, 0}. Accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    out = np.maximum(1.0 - np.abs(t), 0.0)
    return float(out) if out.ndim == 0 else out


def tent_hat(x):
    """Fourier transform of the tent: sin^2(pi x) / (pi x)^2, with tent_hat(0) = 1.

    Accepts scalars or arrays. Near zero the removable singularity is
    evaluated through the even Taylor series in z = pi*x.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    z = np.pi * x
    small = np.abs(x) < _TENT_HAT_SERIES_CUTOFF
    zs = np.where(small, 1.0, z)  # dodge 0/0 in the masked-out lanes
    s = np.sin(zs) / zs
    direct = s * s
    z2 = z * z
    series = 1.0 - z2 / 3.0 + (2.0 / 45.0) * z2 * z2
    out = np.where(small, series, direct)
    return float(out[0]) if scalar else out


def delta_k(ts):
    """k-dimensional tent kernel on k-1 coordinates.

    delta_k(t_1..t_{k-1}) = max{1 - (max{0, t} - min{0, t}), 0}, the volume of
    overlap of k unit windows offset by the t_i.  `ts` is a vector of k-1
    reals, or an array whose last axis holds the k-1 coordinates (batched
    evaluation).  k=2 reduces to `tent`.
    """
    ts = np.asarray(ts, dtype=float)
    if ts.ndim == 0:
        ts = ts.reshape(1)
    dim = ts.shape[-1]
    if not 1 <= dim <= DELTA_K_MAX_DIM:
        raise DimensionTooLarge(f"delta_k supports 1 <= k-1 <= {DELTA_K_MAX_DIM}, got {dim}")
    hi = np.maximum(ts.max(axis=-1), 0.0)
    lo = np.minimum(ts.min(axis=-1), 0.0)
    out = np.maximum(1.0 - (hi - lo), 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _stirling2_cached(k, j):
    if j == k:
        return 1
    if j == 0 or j > k:
        return 0
    return j * _stirling2_cached(k - 1, j) + _stirling2_cached(k - 1, j - 1)


def stirling2(k, j):
    """Stirling number of the second kind: partitions of a k-set into j blocks.

    Exact integer via the recurrence S(k,j) = j*S(k-1,j) + S(k-1,j-1).
    """
    if not (0 <= j <= k <= STIRLING_MAX_ORDER):
        raise OutOfRange(f"stirling2 requires 0 <= j <= k <= {STIRLING_MAX_ORDER}")
    return _stirling2_cached(k, j)


def poisson_moment(k, l):
    """k-th raw moment of a Poisson(L) variable: sum_j S(k,j) * L^j."""
    if k < 1:
        raise OutOfRange("poisson_moment requires k >= 1")
    if k > STIRLING_MAX_ORDER:
        raise OutOfRange(f"poisson_moment supports k <= {STIRLING_MAX_ORDER}")
    if l < 0:
        raise OutOfRange("poisson_moment requires L >= 0")
    return float(sum(_stirling2_cached(k, j) * l**j for j in range(1, k + 1)))


def normal_moment(k):
    """k-th raw moment of a standard Gaussian: 0 for odd k, (k-1)!! for even k."""
    if k < 1:
        raise OutOfRange("normal_moment requires k >= 1")
    if k % 2 == 1:
        return 0.0
    out = 1
    for i in range(1, k, 2):
        out *= i
    return float(out)


def ck_factor(k, n):
    """Falling-factorial correction (1 - 1/N)...(1 - (k-1)/N) for k-tuples out of N."""
    if not 2 <= k <= n:
        raise OutOfRange("ck_factor requires 2 <= k <= N")
    out = 1.0
    for i in range(1, k):
        out *= 1.0 - i / n
    return out


def normalized_poisson_mgf(t, l):
    """MGF of (Y - L)/sqrt(L) for Y ~ Poisson(L): exp(-t sqrt(L) + L(e^{t/sqrt(L)} - 1)).

    Tends to exp(t^2/2) as L grows.  Raises OverflowError (rather than
    returning inf) when the exponent leaves the representable range.
    """
    if l <= 0:
        raise OutOfRange("normalized_poisson_mgf requires L > 0")
    root = math.sqrt(l)
    exponent = -t * root + l * math.expm1(t / root)
    if exponent > 709.0:  # exp() overflows float64 just above this
        raise OverflowError(
            f"normalized_poisson_mgf exponent {exponent:.3g} exceeds float range"
        )
    return math.exp(exponent)


@dataclass(frozen=True)
class MomentTable:
    """Raw moments mu_1..mu_{max_order} of Poisson(L) and the standard Gaussian."""

    max_order: int
    l_value: float
    poisson: tuple
    normal: tuple

    def __post_init__(self):
        if not 1 <= self.max_order <= STIRLING_MAX_ORDER:
            raise OutOfRange(f"max_order must be in 1..{STIRLING_MAX_ORDER}")
        if len(self.poisson) != self.max_order or len(self.normal) != self.max_order:
            raise OutOfRange("moment lists must have length max_order")

    @classmethod
    def build(cls, max_order, l_value):
        poisson = tuple(poisson_moment(k, l_value) for k in range(1, max_order + 1))
        normal = tuple(normal_moment(k) for k in range(1, max_order + 1))
        return cls(max_order=max_order, l_value=float(l_value), poisson=poisson, normal=normal)

    def poisson_moment(self, k):
        return self.poisson[k - 1]

    def normal_moment(self, k):
        return self.normal[k - 1]
