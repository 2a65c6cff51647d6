"""Rigorous interval arithmetic over exact rational endpoints.

Endpoints are `fractions.Fraction`, so the ring operations (+, -, *) are
exact and never need outward rounding; enclosure only enters when a
transcendental value is boxed in the first place.  Enclosures of
cos(2*pi*k/m) come from mpmath's interval context, whose endpoints are
dyadic and convert to Fraction without loss, except at arguments that are
rational multiples of pi with denominator 1, 2, 3, 4 or 6, where the
cosine is itself rational and the enclosure is a point.  Square roots of
integers are enclosed with pure integer arithmetic via math.isqrt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

__all__ = ["RInterval", "cos_enclosure", "sqrt_enclosure"]

_GUARD_BITS = 12


@dataclass(frozen=True)
class RInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: [{self.lo}, {self.hi}]")

    @staticmethod
    def point(v) -> "RInterval":
        f = Fraction(v)
        return RInterval(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    def __add__(self, other):
        other = _coerce(other)
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def scale(self, q) -> "RInterval":
        q = Fraction(q)
        if q >= 0:
            return RInterval(self.lo * q, self.hi * q)
        return RInterval(self.hi * q, self.lo * q)

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        cands = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return RInterval(min(cands), max(cands))

    def sign_or_none(self):
        """+1 or -1 if the interval is strictly one-signed; 0 for the point
        interval at zero; None when the sign is not decided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        return None

    def mid_float(self) -> float:
        return float((self.lo + self.hi) / 2)


def _coerce(v) -> RInterval:
    if isinstance(v, RInterval):
        return v
    return RInterval.point(v)


def _mpf_tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    man = int(man)
    if man == 0 and exp != 0:
        raise ValueError("non-finite enclosure endpoint")
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v


_SPECIAL_COS = {
    # cos(2*pi*p/q) for reduced p/q with q in {1, 2, 3, 4, 6}
    1: {0: Fraction(1)},
    2: {1: Fraction(-1)},
    3: {1: Fraction(-1, 2), 2: Fraction(-1, 2)},
    4: {1: Fraction(0), 3: Fraction(0)},
    6: {1: Fraction(1, 2), 5: Fraction(1, 2)},
}


def cos_enclosure(k: int, m: int, precision: int = 128) -> RInterval:
    """Enclosure of cos(2*pi*k/m) of width at most 2^(1-precision).

    Arguments at the classical rational-cosine angles are returned as
    exact points; everything else goes through interval cos/pi.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    t = Fraction(k % m, m)
    special = _SPECIAL_COS.get(t.denominator)
    if special is not None:
        return RInterval.point(special[t.numerator % t.denominator])
    prec = max(precision, 8) + _GUARD_BITS
    target = Fraction(1, 2 ** (precision - 1))
    while True:
        old = mpmath.iv.prec
        try:
            mpmath.iv.prec = prec
            enc = mpmath.iv.cos(2 * mpmath.iv.pi * t.numerator / t.denominator)
        finally:
            mpmath.iv.prec = old
        lo_t, hi_t = enc._mpi_
        ival = RInterval(_mpf_tuple_to_fraction(lo_t), _mpf_tuple_to_fraction(hi_t))
        if ival.width <= target:
            return ival
        prec *= 2


def sqrt_enclosure(n: int, precision: int = 128) -> RInterval:
    """Enclosure of sqrt(n) for a nonnegative integer n.

    Exact point for perfect squares; otherwise dyadic endpoints one ulp
    apart at the requested precision, from integer square roots.
    """
    if n < 0:
        raise ValueError("negative radicand")
    root = math.isqrt(n)
    if root * root == n:
        return RInterval.point(root)
    shift = max(precision, 4)
    s = math.isqrt(n << (2 * shift))
    denom = 1 << shift
    return RInterval(Fraction(s, denom), Fraction(s + 1, denom))
