"""Exact arithmetic in the real cyclotomic field Q(cos(2*pi/m)).

A value is stored as a rational combination

    sum_{k=0}^{floor(m/2)} q_k * cos(2*pi*k/m),

which is closed under addition and, via the product-to-sum identity
2*cos(a)*cos(b) = cos(a+b) + cos(a-b) with indices folded into
[0, m/2], under multiplication.  The representation is not unique
(the cosines are linearly dependent once m has proper divisors), so
equality and the exact zero test go through a canonical form: the value
is rewritten as a polynomial in c = 2*cos(2*pi/m) using the Dickson
polynomials D_k (D_k(2*cos t) = 2*cos(k*t)) and reduced modulo the
minimal polynomial of c.  A value is zero iff its canonical form is the
zero polynomial.

Sign determination first consults the canonical form (deciding zero
exactly), then evaluates rigorous interval enclosures at doubling
precision until the interval clears zero.
"""

from __future__ import annotations

from fractions import Fraction

from .intervals import RInterval, cos_enclosure
from .minpoly import cos2pi_minpoly

__all__ = ["CycloReal", "IndeterminateSignError", "precision_schedule"]

DEFAULT_MAX_BITS = 1 << 16


class IndeterminateSignError(ArithmeticError):
    """Raised when the sign of a value cannot be certified within the
    precision cap.  Never silently resolved: callers must treat this as
    'unknown', not as a sign."""


def precision_schedule(max_bits: int = DEFAULT_MAX_BITS):
    """Precisions tried by sign tests: 128 bits, doubling up to max_bits."""
    p = 128
    while p < max_bits:
        yield p
        p *= 2
    yield max_bits


def _fold(k: int, m: int) -> int:
    k %= m
    return m - k if 2 * k > m else k


class CycloReal:
    """Element of Q(cos(2*pi/m)) in the cosine basis."""

    __slots__ = ("m", "coeffs", "_canonical")

    def __init__(self, m: int, coeffs):
        if m < 1:
            raise ValueError("modulus must be >= 1")
        self.m = m
        half = m // 2
        cs = list(coeffs)
        if len(cs) != half + 1:
            raise ValueError(f"need {half + 1} cosine coefficients for m={m}")
        self.coeffs = tuple(Fraction(c) for c in cs)
        self._canonical = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(m: int) -> "CycloReal":
        return CycloReal(m, [0] * (m // 2 + 1))

    @staticmethod
    def from_rational(q, m: int) -> "CycloReal":
        cs = [Fraction(0)] * (m // 2 + 1)
        cs[0] = Fraction(q)
        return CycloReal(m, cs)

    @staticmethod
    def from_cos(m: int, k: int, coeff=1) -> "CycloReal":
        """coeff * cos(2*pi*k/m)."""
        cs = [Fraction(0)] * (m // 2 + 1)
        cs[_fold(k, m)] += Fraction(coeff)
        return CycloReal(m, cs)

    @staticmethod
    def from_exp_vector(m: int, vec) -> "CycloReal":
        """Value sum_t vec[t] * zeta^t for zeta = exp(-2*pi*i/m), which must
        be real (vec symmetric under t -> m-t); folds to the cosine basis."""
        if len(vec) != m:
            raise ValueError("exponent vector must have length m")
        half = m // 2
        cs = [Fraction(0)] * (half + 1)
        cs[0] = Fraction(vec[0])
        for t in range(1, half + 1):
            if 2 * t == m:
                cs[t] = Fraction(vec[t])
            else:
                if vec[t] != vec[m - t]:
                    raise ValueError("exponent vector does not describe a real value")
                # zeta^t + zeta^(m-t) = 2*cos(2*pi*t/m)
                cs[t] = 2 * Fraction(vec[t])
        return CycloReal(m, cs)

    # -- ring operations ----------------------------------------------

    def _same_field(self, other: "CycloReal"):
        if self.m != other.m:
            raise ValueError(f"mixed moduli {self.m} and {other.m}")

    def __add__(self, other):
        if not isinstance(other, CycloReal):
            other = CycloReal.from_rational(other, self.m)
        self._same_field(other)
        return CycloReal(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloReal(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, CycloReal):
            other = CycloReal.from_rational(other, self.m)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> "CycloReal":
        q = Fraction(q)
        return CycloReal(self.m, [a * q for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, CycloReal):
            return self.scale(other)
        self._same_field(other)
        m = self.m
        half = m // 2
        out = [Fraction(0)] * (half + 1)
        for a, qa in enumerate(self.coeffs):
            if not qa:
                continue
            for b, qb in enumerate(other.coeffs):
                if not qb:
                    continue
                prod = qa * qb / 2
                out[_fold(a + b, m)] += prod
                out[_fold(a - b, m)] += prod
        return CycloReal(m, out)

    __rmul__ = __mul__

    # -- canonical form and exact predicates ---------------------------

    def canonical(self) -> tuple[Fraction, ...]:
        """Coefficients of the value as a reduced polynomial in 2*cos(2*pi/m).

        Degree is strictly below deg(minpoly); two values are equal iff
        their canonical forms are equal.  Trailing zeros are trimmed, so
        the zero value has the empty tuple as canonical form.
        """
        if self._canonical is not None:
            return self._canonical
        m = self.m
        # expand in Dickson basis: cos(2 pi k/m) = D_k(c)/2, D_0/2 = 1
        poly = [Fraction(0)] * (m // 2 + 1)
        poly[0] = self.coeffs[0]
        d_prev, d_cur = [2], [0, 1]
        for k in range(1, m // 2 + 1):
            q = self.coeffs[k]
            if q:
                h = q / 2
                for j, dj in enumerate(d_cur):
                    poly[j] += h * dj
            if k < m // 2:
                nxt = [0] * (k + 2)
                for j, dj in enumerate(d_cur):
                    nxt[j + 1] += dj
                for j, dj in enumerate(d_prev):
                    nxt[j] -= dj
                d_prev, d_cur = d_cur, nxt
        mp = cos2pi_minpoly(m)
        deg = len(mp) - 1
        # reduce mod the monic minimal polynomial
        for i in range(len(poly) - 1, deg - 1, -1):
            c = poly[i]
            if c:
                poly[i] = Fraction(0)
                for j in range(deg):
                    poly[i - deg + j] -= c * mp[j]
        while poly and not poly[-1]:
            poly.pop()
        self._canonical = tuple(poly)
        return self._canonical

    def is_zero(self) -> bool:
        return not self.canonical()

    def as_rational(self):
        """The value as a Fraction when it is rational, else None."""
        can = self.canonical()
        if len(can) == 0:
            return Fraction(0)
        if len(can) == 1:
            return can[0]
        return None

    def __eq__(self, other):
        if isinstance(other, CycloReal):
            if self.m != other.m:
                return NotImplemented
            return (self - other).is_zero()
        if isinstance(other, (int, Fraction)):
            return (self - CycloReal.from_rational(other, self.m)).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.canonical()))

    # -- numeric evaluation --------------------------------------------

    def enclosure(self, precision: int = 128) -> RInterval:
        acc = RInterval.point(self.coeffs[0])
        for k in range(1, len(self.coeffs)):
            q = self.coeffs[k]
            if q:
                acc = acc + cos_enclosure(k, self.m, precision).scale(q)
        return acc

    def sign(self, max_bits: int = DEFAULT_MAX_BITS) -> int:
        """Certified sign in {-1, 0, +1}; zero is decided algebraically."""
        if self.is_zero():
            return 0
        for prec in precision_schedule(max_bits):
            s = self.enclosure(prec).sign_or_none()
            if s:
                return s
        raise IndeterminateSignError(
            f"sign of nonzero value in Q(cos(2*pi/{self.m})) undecided at {max_bits} bits"
        )

    def __float__(self):
        return self.enclosure(128).mid_float()

    def __repr__(self):
        terms = []
        for k, q in enumerate(self.coeffs):
            if q:
                terms.append(f"{q}*cos(2*pi*{k}/{self.m})" if k else f"{q}")
        return f"CycloReal(m={self.m}: {' + '.join(terms) or '0'})"
