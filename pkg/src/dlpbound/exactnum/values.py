"""Exact value types layered on the cyclotomic reals.

SurdPair represents a + b*sqrt(s) with a, b in Q(cos(2*pi/m)) and s a
positive integer; it is the natural home for dual constraint values,
where the sqrt enters through an irrational sphere radius.  Its sign
algorithm never trusts floating point: when the two parts agree in sign
the answer is immediate; otherwise the exact product a^2 - b^2*s
arbitrates.  The residual case a^2 = b^2*s with both parts nonzero is
reported as indeterminate rather than resolved, by design: the zero
test of a SurdPair is defined as "both parts are zero", and the sign
routine refuses to assert anything stronger.

BoundValue represents a finite rational combination sum_n q_n*sqrt(n)
over squarefree n (n = 1 being the rational part).  Distinct square
roots of squarefree integers are linearly independent over Q, so the
zero test is coefficientwise and exact.  bound_decimal() turns such a
value into a certified decimal lower or upper approximation by
escalating interval precision until the requested digit is pinned.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloReal, IndeterminateSignError, precision_schedule, DEFAULT_MAX_BITS
from .intervals import RInterval, sqrt_enclosure

__all__ = [
    "SurdPair",
    "BoundValue",
    "square_split",
    "sign",
    "bound_decimal",
    "parse_bound_expr",
]


def square_split(n: int) -> tuple[int, int]:
    """Write n = s^2 * t with t squarefree; returns (s, t)."""
    if n <= 0:
        raise ValueError("positive integer required")
    s, t = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                t *= p
        p += 1 if p == 2 else 2
    return s, t * n


class SurdPair:
    """a + b*sqrt(s) with cyclotomic-rational parts and integer radicand."""

    __slots__ = ("a", "b", "s")

    def __init__(self, a: CycloReal, b: CycloReal, s: int):
        if s < 1:
            raise ValueError("radicand must be >= 1")
        if a.m != b.m:
            raise ValueError("mismatched cyclotomic moduli")
        sq, rad = square_split(s)
        if rad == 1:
            # sqrt(s) is the integer sq: collapse into the rational part
            a = a + b.scale(sq)
            b = CycloReal.zero(a.m)
            s = 1
        elif sq != 1:
            b = b.scale(sq)
            s = rad
        self.a, self.b, self.s = a, b, s

    @property
    def m(self) -> int:
        return self.a.m

    def is_zero(self) -> bool:
        """True iff both parts have zero canonical form.

        This deliberately does not attempt to detect a + b*sqrt(s) = 0
        with a, b both nonzero (possible when sqrt(s) happens to lie in
        the cyclotomic field); sign() reports that case as indeterminate.
        """
        return self.a.is_zero() and self.b.is_zero()

    def __add__(self, other):
        if isinstance(other, SurdPair):
            if self.s != other.s and not self.b.is_zero() and not other.b.is_zero():
                raise ValueError("mismatched radicands")
            s = self.s if not self.b.is_zero() else other.s
            return SurdPair(self.a + other.a, self.b + other.b, s)
        return SurdPair(self.a + other, self.b, self.s)

    __radd__ = __add__

    def __neg__(self):
        return SurdPair(-self.a, -self.b, self.s)

    def __sub__(self, other):
        return self + (-other if isinstance(other, SurdPair) else -Fraction(other))

    def scale(self, q) -> "SurdPair":
        return SurdPair(self.a.scale(q), self.b.scale(q), self.s)

    def enclosure(self, precision: int = 128) -> RInterval:
        enc = self.a.enclosure(precision)
        if not self.b.is_zero():
            enc = enc + self.b.enclosure(precision) * sqrt_enclosure(self.s, precision)
        return enc

    def sign(self, max_bits: int = DEFAULT_MAX_BITS) -> int:
        sa = self.a.sign(max_bits)
        if self.b.is_zero():
            return sa
        sb = self.b.sign(max_bits)  # sign of b*sqrt(s) since sqrt(s) > 0
        if sa == 0:
            return sb
        if sb == 0 or sa == sb:
            return sa
        # opposite signs: |a| vs |b|*sqrt(s) decided by t = a^2 - s*b^2
        t = self.a * self.a - (self.b * self.b).scale(self.s)
        st = t.sign(max_bits)
        if st == 0:
            raise IndeterminateSignError(
                "a^2 = s*b^2 with both parts nonzero: sign not asserted"
            )
        return sa if st > 0 else sb

    def as_bound_value(self):
        """Conversion to a BoundValue when both parts are rational."""
        ra, rb = self.a.as_rational(), self.b.as_rational()
        if ra is None or rb is None:
            return None
        return BoundValue({1: ra}) + BoundValue.from_surd(rb, self.s)

    def __repr__(self):
        return f"SurdPair({self.a!r} + ({self.b!r})*sqrt({self.s}))"


class BoundValue:
    """Exact value of the form sum over squarefree n of q_n * sqrt(n)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[int, Fraction] = {}
        for n, q in (terms or {}).items():
            q = Fraction(q)
            if not q:
                continue
            sq, rad = square_split(n)
            clean[rad] = clean.get(rad, Fraction(0)) + q * sq
        self.terms = {n: q for n, q in sorted(clean.items()) if q}

    @staticmethod
    def from_rational(q) -> "BoundValue":
        return BoundValue({1: Fraction(q)})

    @staticmethod
    def from_surd(q, n: int) -> "BoundValue":
        return BoundValue({n: Fraction(q)})

    def is_zero(self) -> bool:
        return not self.terms

    def as_rational(self):
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {1}:
            return self.terms[1]
        return None

    def __add__(self, other):
        if not isinstance(other, BoundValue):
            other = BoundValue.from_rational(other)
        out = dict(self.terms)
        for n, q in other.terms.items():
            out[n] = out.get(n, Fraction(0)) + q
        return BoundValue(out)

    __radd__ = __add__

    def __neg__(self):
        return BoundValue({n: -q for n, q in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, BoundValue):
            other = BoundValue.from_rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> "BoundValue":
        q = Fraction(q)
        return BoundValue({n: c * q for n, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BoundValue):
            return self.scale(other)
        out: dict[int, Fraction] = {}
        for n1, q1 in self.terms.items():
            for n2, q2 in other.terms.items():
                sq, rad = square_split(n1 * n2)
                out[rad] = out.get(rad, Fraction(0)) + q1 * q2 * sq
        return BoundValue(out)

    __rmul__ = __mul__

    def enclosure(self, precision: int = 128) -> RInterval:
        acc = RInterval.point(0)
        for n, q in self.terms.items():
            if n == 1:
                acc = acc + RInterval.point(q)
            else:
                acc = acc + sqrt_enclosure(n, precision).scale(q)
        return acc

    def sign(self, max_bits: int = DEFAULT_MAX_BITS) -> int:
        if self.is_zero():
            return 0
        if len(self.terms) == 1:
            q = next(iter(self.terms.values()))
            return 1 if q > 0 else -1
        for prec in precision_schedule(max_bits):
            s = self.enclosure(prec).sign_or_none()
            if s:
                return s
        raise IndeterminateSignError("sign of surd sum undecided at precision cap")

    def __eq__(self, other):
        if isinstance(other, BoundValue):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == BoundValue.from_rational(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __lt__(self, other):
        return (self - _coerce_bv(other)).sign() < 0

    def __le__(self, other):
        return (self - _coerce_bv(other)).sign() <= 0

    def __gt__(self, other):
        return (self - _coerce_bv(other)).sign() > 0

    def __ge__(self, other):
        return (self - _coerce_bv(other)).sign() >= 0

    def __float__(self):
        return self.enclosure(128).mid_float()

    def serialize(self) -> str:
        """Canonical text form, e.g. '1/4 + 3/8*sqrt(2)'; zero is '0'."""
        if not self.terms:
            return "0"
        parts = []
        for n, q in self.terms.items():
            body = str(q if not parts else abs(q))
            if n != 1:
                body += f"*sqrt({n})"
            if not parts:
                parts.append(body)
            else:
                parts.append(("+ " if q > 0 else "- ") + body)
        return " ".join(parts)

    __repr__ = serialize


def _coerce_bv(v) -> BoundValue:
    return v if isinstance(v, BoundValue) else BoundValue.from_rational(v)


def parse_bound_expr(text: str) -> BoundValue:
    """Parse the serialize() format; also accepts plain decimals like '0.125'."""
    text = text.strip()
    if not text:
        raise ValueError("empty bound expression")
    terms: dict[int, Fraction] = {}
    for piece in _split_terms(text):
        piece = piece.strip()
        if not piece:
            continue
        neg = piece.startswith("-")
        if piece[0] in "+-":
            piece = piece[1:].strip()
        if "sqrt(" in piece:
            coeff_s, _, rad_s = piece.partition("sqrt(")
            coeff_s = coeff_s.rstrip("* ").strip()
            rad = int(rad_s.rstrip(")").strip())
            coeff = _parse_rational(coeff_s) if coeff_s else Fraction(1)
        else:
            rad = 1
            coeff = _parse_rational(piece)
        if neg:
            coeff = -coeff
        sq, rad = square_split(rad)
        terms[rad] = terms.get(rad, Fraction(0)) + coeff * sq
    return BoundValue(terms)


def _split_terms(text: str):
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] == " ":
            out.append("".join(cur))
            cur = [ch]
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_rational(s: str) -> Fraction:
    s = s.strip()
    return Fraction(s)


def sign(value, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Certified sign of an exact value (Fraction, CycloReal, SurdPair or
    BoundValue): -1, 0 or +1, raising IndeterminateSignError rather than
    ever guessing."""
    if isinstance(value, (int, Fraction)):
        return (value > 0) - (value < 0)
    if isinstance(value, (CycloReal, SurdPair, BoundValue)):
        return value.sign(max_bits)
    raise TypeError(f"no certified sign for {type(value).__name__}")


def bound_decimal(value, digits: int, mode: str = "floor",
                  max_bits: int = DEFAULT_MAX_BITS) -> str:
    """Certified decimal bound on an exact value with `digits` places.

    mode='floor' rounds toward -inf (a valid lower bound), mode='ceil'
    toward +inf.  The digit string is exact for rational values and is
    pinned by escalating rigorous enclosures otherwise.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if mode not in ("floor", "ceil"):
        raise ValueError("mode must be 'floor' or 'ceil'")
    value = _coerce_bv(value) if isinstance(value, (int, Fraction)) else value
    scale = 10**digits
    q = value.as_rational() if hasattr(value, "as_rational") else None
    if q is not None:
        n = q * scale
        scaled = n.numerator // n.denominator if mode == "floor" else -((-n.numerator) // n.denominator)
        return _format_scaled(scaled, digits)
    for prec in precision_schedule(max_bits):
        enc = value.enclosure(prec)
        lo = (enc.lo * scale).__floor__()
        hi = (enc.hi * scale).__floor__()
        if mode == "floor":
            if lo == hi:
                return _format_scaled(lo, digits)
        else:
            lo_c = -((-enc.lo * scale).__floor__())
            hi_c = -((-enc.hi * scale).__floor__())
            if lo_c == hi_c:
                return _format_scaled(hi_c, digits)
    raise IndeterminateSignError("decimal digit not pinned at precision cap")


def _format_scaled(n: int, digits: int) -> str:
    sgn = "-" if n < 0 else ""
    a = abs(n)
    return f"{sgn}{a // 10**digits}.{a % 10**digits:0{digits}d}"
