"""Exact number tower: intervals, cyclotomic reals, surd combinations."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from dlpbound.exactnum import (
    BoundValue,
    CycloReal,
    IndeterminateSignError,
    RInterval,
    SurdPair,
    bound_decimal,
    cos_enclosure,
    parse_bound_expr,
    sqrt_enclosure,
)


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 50))


def _cos_combo(m: int, terms: dict[int, Fraction]) -> CycloReal:
    x = CycloReal.zero(m)
    for k, q in terms.items():
        x = x + CycloReal.from_cos(m, k, q)
    return x


def test_interval_arithmetic_soundness():
    # exact rational results must land inside interval results
    rng = random.Random(11)
    for _ in range(2000):
        a, b = _rand_fraction(rng), _rand_fraction(rng)
        ia = RInterval.point(a)
        ib = RInterval.point(b)
        assert a + b in ia + ib
        assert a - b in ia - ib
        assert a * b in ia * ib


def test_interval_membership_and_signs():
    iv = RInterval(Fraction(1, 3), Fraction(1, 2))
    assert Fraction(2, 5) in iv
    assert Fraction(3, 5) not in iv
    assert iv.sign_or_none() == 1
    assert RInterval(Fraction(-2), Fraction(-1)).sign_or_none() == -1
    assert RInterval(Fraction(-1), Fraction(1)).sign_or_none() is None
    with pytest.raises(ValueError):
        RInterval(Fraction(1), Fraction(0))


def test_sqrt_enclosure_squares_bracket_the_radicand():
    for n in (2, 3, 5, 14, 41, 97):
        for bits in (20, 60, 120):
            enc = sqrt_enclosure(n, bits)
            assert enc.lo >= 0
            assert enc.lo * enc.lo <= n <= enc.hi * enc.hi
            assert enc.hi - enc.lo <= Fraction(1, 2 ** (bits - 4))


def test_cos_enclosure_known_values():
    # cos(2*pi*k/m) at rational-cosine arguments
    assert Fraction(1) in cos_enclosure(0, 1, 40)
    assert Fraction(0) in cos_enclosure(1, 4, 40)
    assert Fraction(1, 2) in cos_enclosure(1, 6, 40)
    assert Fraction(-1, 2) in cos_enclosure(1, 3, 40)
    assert Fraction(-1) in cos_enclosure(1, 2, 40)
    # narrow enclosures separate nearby irrational values
    a = cos_enclosure(1, 5, 60)
    b = cos_enclosure(2, 5, 60)
    assert a.lo > b.hi


def test_cycloreal_rational_recognition():
    # cos(2pi/6) = 1/2 so a combination over m=6 collapses to a rational
    x = _cos_combo(6, {0: Fraction(1, 3), 1: Fraction(2)})
    assert x.as_rational() == Fraction(1, 3) + 1
    y = CycloReal.from_cos(5, 1)
    assert y.as_rational() is None


def test_cycloreal_full_character_sum_vanishes():
    # the m-th roots of unity sum to zero for every m > 1
    for m in range(2, 16):
        z = CycloReal.from_exp_vector(m, [1] * m)
        assert z.is_zero()
        assert z.as_rational() == 0


def test_cycloreal_enclosure_tracks_float():
    rng = random.Random(23)
    for _ in range(120):
        m = rng.randint(2, 30)
        terms = {k: _rand_fraction(rng) for k in rng.sample(range(m), k=min(m, 4))}
        x = _cos_combo(m, terms)
        approx = sum(float(q) * math.cos(2 * math.pi * k / m) for k, q in terms.items())
        enc = x.enclosure(70)
        assert float(enc.lo) - 1e-9 <= approx <= float(enc.hi) + 1e-9
        assert enc.hi - enc.lo <= Fraction(1, 2**40)


def test_cycloreal_sign_never_misclassifies():
    rng = random.Random(31)
    for _ in range(150):
        m = rng.randint(2, 24)
        terms = {k: _rand_fraction(rng) for k in rng.sample(range(m), k=min(m, 3))}
        x = _cos_combo(m, terms)
        if x.is_zero():
            assert x.sign() == 0
            continue
        s = x.sign()
        assert s in (-1, 1)
        mid = x.enclosure(120).mid_float()
        if abs(mid) > 1e-20:
            assert (mid > 0) == (s > 0)


def test_cycloreal_exp_vector_requires_real_symmetry():
    with pytest.raises(ValueError):
        CycloReal.from_exp_vector(5, [0, 1, 0, 0, 0])
    # symmetric input is fine: e(1/5) + e(4/5) = 2 cos(2pi/5)
    x = CycloReal.from_exp_vector(5, [0, 1, 0, 0, 1])
    y = CycloReal.from_cos(5, 1, 2)
    assert (x - y).is_zero()


def test_cycloreal_ring_ops():
    x = CycloReal.from_cos(8, 1, 2)  # 2 cos(pi/4) = sqrt(2)
    assert (x * x).as_rational() == 2
    three_x = x + x + x
    assert (three_x - x.scale(Fraction(3))).is_zero()
    assert x == CycloReal.from_cos(8, 1, 2)
    assert (-x).sign() == -1


def test_surdpair_sign_and_bound_value():
    one = CycloReal.from_rational(Fraction(1), 1)
    s = SurdPair(one, -one, 2)  # 1 - sqrt(2) < 0
    assert s.sign() == -1
    assert s.as_bound_value() == BoundValue({1: Fraction(1), 2: Fraction(-1)})
    t = s + SurdPair(CycloReal.zero(1), one, 2)  # add back sqrt(2)
    assert t.sign() == 1
    assert t.as_bound_value() == BoundValue({1: Fraction(1)})
    zero = SurdPair(CycloReal.zero(1), CycloReal.zero(1), 7)
    assert zero.is_zero() and zero.sign() == 0


def test_boundvalue_group_laws():
    rng = random.Random(47)
    rads = (1, 2, 3, 5, 14)
    for _ in range(300):
        a = BoundValue({r: _rand_fraction(rng) for r in rng.sample(rads, k=2)})
        b = BoundValue({r: _rand_fraction(rng) for r in rng.sample(rads, k=2)})
        assert (a + b) - b == a
        assert a - a == BoundValue({})


def test_boundvalue_comparisons_are_exact():
    root2 = BoundValue({2: Fraction(1)})
    root3 = BoundValue({3: Fraction(1)})
    root5 = BoundValue({5: Fraction(1)})
    # sqrt2 + sqrt3 and sqrt5 agree to the first decimal but are distinct
    assert root2 + root3 != root5
    assert root2 + root3 > root5
    assert BoundValue({1: Fraction(7, 5)}) < root2
    assert BoundValue({1: Fraction(17, 12)}) > root2
    assert BoundValue({8: Fraction(1)}) == BoundValue({2: Fraction(2)})


def test_boundvalue_float_and_scale():
    v = BoundValue({1: Fraction(1, 4), 2: Fraction(1, 8)})
    assert abs(float(v) - (0.25 + 2**0.5 / 8)) < 1e-15
    assert v.scale(Fraction(8)) == BoundValue({1: Fraction(2), 2: Fraction(1)})
    assert BoundValue.from_surd(Fraction(1, 8), 2) == BoundValue({2: Fraction(1, 8)})


def test_boundvalue_serialize_roundtrip():
    cases = [
        BoundValue({1: Fraction(1, 20)}),
        BoundValue({2: Fraction(1, 8)}),
        BoundValue({1: Fraction(-3, 7), 5: Fraction(2, 9)}),
        BoundValue({}),
    ]
    for v in cases:
        assert parse_bound_expr(v.serialize()) == v


def test_parse_bound_expr():
    assert parse_bound_expr("1/20") == BoundValue({1: Fraction(1, 20)})
    assert parse_bound_expr("1/8*sqrt(2)") == BoundValue({2: Fraction(1, 8)})
    assert parse_bound_expr("0.125") == BoundValue({1: Fraction(1, 8)})
    with pytest.raises(ValueError):
        parse_bound_expr("sqrt(-1)")


def test_bound_decimal_monotone_and_exact():
    third = BoundValue({1: Fraction(1, 3)})
    assert bound_decimal(third, 8, "floor") == "0.33333333"
    assert bound_decimal(third, 8, "ceil") == "0.33333334"
    # exactly representable values floor and ceil to the same string
    eighth = BoundValue({1: Fraction(1, 8)})
    assert bound_decimal(eighth, 8, "floor") == bound_decimal(eighth, 8, "ceil")
    root2_16 = BoundValue({2: Fraction(1, 16)})
    lo = Fraction(bound_decimal(root2_16, 12, "floor"))
    hi = Fraction(bound_decimal(root2_16, 12, "ceil"))
    assert lo < root2_16 < hi
    assert hi - lo == Fraction(1, 10**12)


def test_sign_of_zero_terminates():
    # canonical cancellation must report zero instead of escalating forever
    x = CycloReal.from_cos(12, 1, 2)
    assert (x - x).sign() == 0
    # close but unequal values still resolve at bounded precision
    a = CycloReal.from_cos(7, 1)
    b = CycloReal.from_cos(7, 2)
    assert (a - b).sign() == 1
    assert issubclass(IndeterminateSignError, ArithmeticError)
