"""Orbit enumeration against brute force and counting formulas."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest

from dlpbound.orbits import (
    Params,
    canonicalize,
    enumerate_reps,
    norm_sq,
    orbit_size,
)

SWEEP = [(d, m) for d in range(1, 7) for m in range(2, 13)]


def test_rep_count_formula():
    # number of sorted tuples over [0, m//2] is C(d + m//2, d)
    for d, m in SWEEP:
        index = enumerate_reps(d, m)
        assert len(index) == math.comb(d + m // 2, d), (d, m)


def test_orbit_sizes_sum_to_group_order():
    for d, m in SWEEP:
        index = enumerate_reps(d, m)
        assert sum(index.orbit_sizes) == m**d, (d, m)


BRUTE_CASES = [(1, 9), (2, 12), (2, 31), (3, 8), (3, 21), (4, 8), (5, 6), (6, 4), (6, 10)]


def test_bruteforce_partition_and_class_sizes():
    # every vector of Z_m^d canonicalizes to an enumerated representative
    # and the class sizes reproduce orbit_size; covers m^d up to 10^6
    for d, m in BRUTE_CASES:
        assert m**d <= 10**6
        index = enumerate_reps(d, m)
        counts: dict[tuple[int, ...], int] = {}
        for z in itertools.product(range(m), repeat=d):
            rep = canonicalize(z, m)
            counts[rep] = counts.get(rep, 0) + 1
        assert set(counts) == set(index.reps), (d, m)
        for j, rep in enumerate(index.reps):
            assert counts[rep] == index.orbit_sizes[j], (d, m, rep)


def test_canonicalize_idempotent_and_group_invariant():
    rng = random.Random(7)
    for _ in range(300):
        d = rng.randint(1, 6)
        m = rng.randint(2, 12)
        z = [rng.randrange(m) for _ in range(d)]
        rep = canonicalize(z, m)
        assert canonicalize(rep, m) == rep
        # apply a random signed permutation
        perm = list(range(d))
        rng.shuffle(perm)
        signs = [rng.choice((1, -1)) for _ in range(d)]
        moved = [(signs[i] * z[perm[i]]) % m for i in range(d)]
        assert canonicalize(moved, m) == rep


def test_orbit_size_hand_values():
    # entries strictly between 0 and m/2 each contribute a sign flip;
    # repeated values shrink the permutation factor
    assert orbit_size((0, 0), 4) == 1
    assert orbit_size((0, 1), 4) == 4
    assert orbit_size((1, 1), 4) == 4
    assert orbit_size((2, 2), 4) == 1
    assert orbit_size((1, 2), 4) == 4
    assert orbit_size((1, 2, 3), 8) == 3 * 2 * 1 * 2**3


def test_norm_sq():
    assert norm_sq((0, 1, 2)) == 5
    assert norm_sq(()) == 0


def test_position_accepts_raw_vectors():
    index = enumerate_reps(2, 6)
    pos = index.position((5, 0))  # canonicalizes to (0, 1)
    assert index.reps[pos] == (0, 1)


def test_params_validation():
    Params(d=3, m=21, r2=41)
    with pytest.raises(ValueError):
        Params(d=0, m=4, r2=4)
    with pytest.raises(ValueError):
        Params(d=2, m=1, r2=1)
    with pytest.raises(ValueError):
        Params(d=2, m=4, r2=0)
    with pytest.raises(ValueError):
        # torus narrower than the diameter: 4*r2 > m^2
        Params(d=3, m=4, r2=5)


def test_mu0_exact_values():
    # (r/2)^d as q*sqrt(s) with squarefree s
    assert Params(d=1, m=4, r2=4).mu0_exact() == (Fraction(1), 1)
    assert Params(d=2, m=6, r2=8).mu0_exact() == (Fraction(2), 1)
    assert Params(d=3, m=4, r2=2).mu0_exact() == (Fraction(1, 4), 2)
    q, rad = Params(d=3, m=21, r2=41).mu0_exact()
    assert (q, rad) == (Fraction(41, 8), 41)
    q, rad = Params(d=5, m=10, r2=14).mu0_exact()
    # (sqrt(14)/2)^5 = 14^2 * sqrt(14) / 32
    assert (q, rad) == (Fraction(196, 32), 14)


def test_mu0_float_matches_exact():
    from dlpbound.exactnum import sqrt_enclosure

    for params in (Params(3, 21, 41), Params(5, 10, 14), Params(4, 16, 30)):
        q, rad = params.mu0_exact()
        enc = sqrt_enclosure(rad, 80).scale(q)
        assert float(enc.lo) - 1e-9 <= params.mu0_float() <= float(enc.hi) + 1e-9
