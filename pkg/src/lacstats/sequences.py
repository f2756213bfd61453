"""Lacunary sequence generation and high-precision fractional parts.

The sequences grow geometrically, so computing {alpha * a_n} in float64 is
hopeless beyond n ~ 50.  We pick a static precision upfront (linear in
N log C), build the sequence and the products at that precision with mpmath,
and reduce mod 1 there; every returned point carries absolute error at most
2^-64.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
import threading

import mpmath
import numpy as np

from .errors import InvalidSpec, LacunarityViolation, PrecisionExhausted

GUARD_BITS = 64
_PRECISION_CAP = 1 << 26  # bits; beyond this the backend is deemed exhausted

# mpmath precision is process-global state; serialize precision-sensitive work.
_MP_LOCK = threading.Lock()

# Relative slack for the lacunarity scan: absorbs last-ulp rounding of the
# high-precision products without masking any real violation.
_SCAN_SLACK = 1.0 - 2.0**-40


@dataclass(frozen=True)
class SequenceSpec:
    """Parametric description of a positive real lacunary sequence.

    kind:
      geometric            a_n = a1 * C^(n-1)
      geometric-plus-poly  a_n = a1 * C^(n-1) + n^d
      custom-ratios        a_1 = a1, a_{n+1} = a_n * ratios[n-1]

    `ratio` is the claimed lacunarity constant C > 1.  For the poly family
    the additive term erodes consecutive ratios below the nominal C, so the
    scan checks against the midpoint (1+C)/2 instead.
    """

    kind: str
    a1: float = 1.0
    ratio: float = 2.0
    poly_degree: int = 0
    ratios: tuple = ()

    KINDS = ("geometric", "geometric-plus-poly", "custom-ratios")

    def validate(self, n=None):
        if self.kind not in self.KINDS:
            raise InvalidSpec(f"unknown sequence kind {self.kind!r}")
        if not (self.a1 > 0 and math.isfinite(self.a1)):
            raise InvalidSpec(f"a1 must be a positive finite real, got {self.a1}")
        if not (self.ratio > 1 and math.isfinite(self.ratio)):
            raise InvalidSpec(f"lacunarity constant C must satisfy C > 1, got {self.ratio}")
        if self.kind == "geometric-plus-poly" and self.poly_degree < 0:
            raise InvalidSpec("poly_degree must be a non-negative integer")
        if self.kind == "custom-ratios":
            if not self.ratios:
                raise InvalidSpec("custom-ratios spec needs a non-empty ratios list")
            if n is not None and len(self.ratios) < n - 1:
                raise InvalidSpec(
                    f"custom-ratios spec has {len(self.ratios)} ratios, need {n - 1}"
                )

    def scan_constant(self):
        """Constant the post-hoc lacunarity scan checks against."""
        if self.kind == "geometric-plus-poly":
            return (1.0 + self.ratio) / 2.0
        return self.ratio

    def log2_magnitude(self, n):
        """Cheap upper estimate of log2(a_n); used for precision selection."""
        geo = math.log2(self.a1) + (n - 1) * math.log2(self.ratio)
        if self.kind == "geometric":
            return geo
        if self.kind == "geometric-plus-poly":
            poly = self.poly_degree * math.log2(n) if n > 1 else 0.0
            hi, lo = max(geo, poly), min(geo, poly)
            return hi + math.log2(1.0 + 2.0 ** (lo - hi))
        return math.log2(self.a1) + sum(math.log2(r) for r in self.ratios[: n - 1])


def required_precision(spec, alpha_bound, n):
    """Working precision (bits) so that {alpha * a_j} carries error <= 2^-64.

    p = ceil(log2 a_N) + ceil(log2(alpha_bound + 1)) + ceil(log2 N) + 64.
    The three leading terms cover the integer part of alpha * a_N and the
    N-fold accumulation of rounding in the sequence build; the 64-bit tail
    is the guaranteed guard.
    """
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    if alpha_bound < 0:
        raise InvalidSpec("alpha_bound must be >= 0")
    spec.validate(n)
    seq_bits = max(0, math.ceil(spec.log2_magnitude(n)))
    alpha_bits = max(0, math.ceil(math.log2(alpha_bound + 1.0)))
    count_bits = math.ceil(math.log2(n)) if n > 1 else 0
    return seq_bits + alpha_bits + count_bits + GUARD_BITS


def build_sequence(spec, n, precision_bits=None):
    """Generate a_1..a_N at working precision and run the lacunarity scan.

    Returns a list of mpmath.mpf.  Raises LacunarityViolation if any
    consecutive ratio falls below the scan constant, InvalidSpec for a bad
    parametrization.
    """
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    spec.validate(n)
    if precision_bits is None:
        precision_bits = required_precision(spec, 1.0, n)
    if precision_bits > _PRECISION_CAP:
        raise PrecisionExhausted(
            f"requested {precision_bits} bits exceeds backend cap {_PRECISION_CAP}"
        )
    with _MP_LOCK, mpmath.workprec(precision_bits):
        a1 = mpmath.mpf(spec.a1)
        c = mpmath.mpf(spec.ratio)
        values = []
        if spec.kind == "geometric":
            x = a1
            for _ in range(n):
                values.append(x)
                x = x * c
        elif spec.kind == "geometric-plus-poly":
            d = spec.poly_degree
            x = a1
            for i in range(1, n + 1):
                values.append(x + mpmath.mpf(i) ** d)
                x = x * c
        else:
            x = a1
            values.append(x)
            for r in spec.ratios[: n - 1]:
                x = x * mpmath.mpf(r)
                values.append(x)
        c_eff = mpmath.mpf(spec.scan_constant()) * mpmath.mpf(_SCAN_SLACK)
        for i in range(n - 1):
            if values[i + 1] < c_eff * values[i]:
                raise LacunarityViolation(
                    f"a_{i + 2}/a_{i + 1} = {mpmath.nstr(values[i + 1] / values[i], 8)} "
                    f"below scan constant {spec.scan_constant()}"
                )
    return values


@dataclass(frozen=True)
class FracPointSet:
    """N sorted fractional parts {alpha * a_n} with precision metadata.

    Immutable after construction; safe to share across threads.  `values`
    are mpmath floats; `float_values` is the float64 view the statistics
    kernels work on.  alpha is kept exactly as supplied (float, Fraction,
    string, or None for the i.i.d. model).
    """

    n_points: int
    values: tuple
    alpha: object
    precision_bits: int
    max_abs_error: float
    _floats: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_points != len(self.values):
            raise ValueError("n_points does not match len(values)")
        if self.max_abs_error > 2.0**-GUARD_BITS:
            raise ValueError("max_abs_error above the 2^-64 contract")
        prev = None
        for v in self.values:
            if not 0 <= v < 1:
                raise ValueError(f"point {mpmath.nstr(v, 10)} outside [0, 1)")
            if prev is not None and v < prev:
                raise ValueError("values must be sorted ascending")
            prev = v
        object.__setattr__(
            self, "_floats", np.array([float(v) for v in self.values], dtype=float)
        )

    @property
    def float_values(self):
        return self._floats

    @classmethod
    def from_values(cls, values, alpha=None):
        """Wrap plain floats (exact by fiat) as a point set; used by the i.i.d. model."""
        vs = tuple(sorted(mpmath.mpf(float(v)) for v in values))
        return cls(
            n_points=len(vs),
            values=vs,
            alpha=alpha,
            precision_bits=53,
            max_abs_error=0.0,
        )

    def write_csv(self, fh):
        """Debug serialization: index, value to 20 significant digits."""
        fh.write("index,value\r\n")
        for i, v in enumerate(self.values, start=1):
            fh.write(f"{i},{mpmath.nstr(v, 20)}\r\n")


def dd_split(values):
    """Split mpf values into double-double (hi, lo) float64 arrays.

    hi + lo reproduces each value to ~2^-106 absolute, enough headroom for
    phase accumulation n * theta with n up to ~10^8.
    """
    with _MP_LOCK, mpmath.workprec(120):
        hi = np.array([float(v) for v in values], dtype=float)
        lo = np.array(
            [float(v - mpmath.mpf(float(h))) for v, h in zip(values, hi)], dtype=float
        )
    return hi, lo


def _to_mpf_exact(alpha):
    """Convert alpha to mpf at the ambient precision without a float64 detour."""
    if isinstance(alpha, Fraction):
        return mpmath.mpf(alpha.numerator) / mpmath.mpf(alpha.denominator)
    if isinstance(alpha, str):
        return mpmath.mpf(alpha)
    return mpmath.mpf(alpha)


def frac_points(spec, alpha, n, extra_bits=0):
    """Sorted fractional parts {alpha * a_j}, j = 1..N, each within 2^-(64+extra_bits).

    extra_bits buys additional accuracy for consumers that multiply the
    points by large integers (the exponential-sum path).
    """
    if isinstance(alpha, Fraction):
        alpha_bound = abs(alpha.numerator) / alpha.denominator
    else:
        alpha_bound = abs(float(mpmath.mpf(alpha)))
    alpha_bound = float(np.nextafter(alpha_bound, np.inf))
    prec = required_precision(spec, alpha_bound, n) + extra_bits
    seq = build_sequence(spec, n, precision_bits=prec)
    if prec > _PRECISION_CAP:
        raise PrecisionExhausted(f"requested {prec} bits exceeds backend cap")
    with _MP_LOCK, mpmath.workprec(prec):
        alpha_mp = _to_mpf_exact(alpha)
        pts = []
        for a in seq:
            x = alpha_mp * a
            pts.append(x - mpmath.floor(x))
    pts.sort()
    return FracPointSet(
        n_points=n,
        values=tuple(pts),
        alpha=alpha,
        precision_bits=prec,
        max_abs_error=2.0 ** -(GUARD_BITS + extra_bits),
    )
