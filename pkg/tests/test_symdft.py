"""Symmetrized DFT matrix: exact involution, brute-force agreement,
summation formula, Krawtchouk specialization, backend consistency."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from dlpbound.closedform import krawtchouk
from dlpbound.exactnum import CycloReal, cyclotomic_poly, sqrt_enclosure
from dlpbound.orbits import enumerate_reps
from dlpbound.symdft import (
    build_matrix,
    entry_exp_ints,
    kernel,
    scale_decomposition,
)


def _exp_stack(index):
    """All unscaled entries as integer exponent-count matrices A[t],
    so that S[i][j] = sum_t A[t][i, j] * zeta^t."""
    n, m = len(index), index.m
    stack = np.zeros((m, n, n), dtype=np.int64)
    for j in range(n):
        memo: dict = {}
        for i in range(n):
            vec = entry_exp_ints(index.reps[i], index.reps[j], index.m, memo)
            for t, c in enumerate(vec):
                stack[t, i, j] = c
    return stack


def _reduce_mod_cyclotomic(coeff_mats, m):
    """Reduce a polynomial with integer-matrix coefficients modulo the
    m-th cyclotomic polynomial; returns the canonical low-degree tail."""
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    mats = [mat.astype(object) for mat in coeff_mats]
    for w in range(len(mats) - 1, deg - 1, -1):
        top = mats[w]
        for t in range(deg):
            mats[w - deg + t] = mats[w - deg + t] - phi[t] * top
        mats[w] = np.zeros_like(top)
    return mats[:deg]


INVOLUTION_CASES = (
    [(1, m) for m in range(2, 10)]
    + [(2, 4), (2, 7), (2, 12), (2, 20), (3, 5), (3, 8), (3, 12)]
    + [(4, 6), (4, 8), (5, 4), (5, 8), (6, 4), (6, 6), (7, 4), (8, 4)]
)


def test_unscaled_matrix_is_exact_involution():
    # S @ S = m^d * I, checked in Z[zeta_m] by integer matrix arithmetic
    for d, m in INVOLUTION_CASES:
        index = enumerate_reps(d, m)
        n = len(index)
        assert n <= 200, (d, m)
        stack = _exp_stack(index)
        square = np.zeros((m, n, n), dtype=np.int64)
        for u in range(m):
            for v in range(m):
                square[(u + v) % m] += stack[u] @ stack[v]
        tail = _reduce_mod_cyclotomic(list(square), m)
        target = (m**d) * np.eye(n, dtype=object)
        assert np.array_equal(tail[0], target), (d, m)
        for mat in tail[1:]:
            assert not mat.any(), (d, m)


def test_involution_directly_in_cyclotomic_field():
    # same statement for one instance, through CycloReal arithmetic
    index = enumerate_reps(2, 5)
    mat = build_matrix(index, backend="exact").to_unscaled_matrix()
    n = len(index)
    for i in range(n):
        for k in range(n):
            acc = CycloReal.zero(5)
            for j in range(n):
                acc = acc + mat[i][j] * mat[j][k]
            want = Fraction(25 if i == k else 0)
            assert acc.as_rational() == want, (i, k)


def _orbit(rep, m):
    out = set()
    for perm in itertools.permutations(rep):
        for signs in itertools.product((1, -1), repeat=len(rep)):
            out.add(tuple((s * v) % m for s, v in zip(signs, perm)))
    return out


BRUTE_CASES = [(1, 7), (2, 9), (3, 6), (4, 5), (5, 4)]


def test_entries_match_bruteforce_orbit_sums():
    # the contingency-table recursion equals the literal orbit sum
    for d, m in BRUTE_CASES:
        index = enumerate_reps(d, m)
        for j, y in enumerate(index.reps):
            orbit = _orbit(y, m)
            assert len(orbit) == index.orbit_sizes[j]
            memo: dict = {}
            for x in index.reps:
                counts = [0] * m
                for z in orbit:
                    counts[sum(a * b for a, b in zip(x, z)) % m] += 1
                assert entry_exp_ints(x, y, m, memo) == tuple(counts), (d, m, x, y)


def test_zero_row_and_zero_column_closed_forms():
    for d, m in [(2, 6), (3, 4), (4, 5), (1, 9)]:
        index = enumerate_reps(d, m)
        mat = build_matrix(index, backend="exact")
        zero_pos = index.position((0,) * d)
        for j in range(len(index)):
            assert mat.entry_unscaled(zero_pos, j).as_rational() == index.orbit_sizes[j]
            assert mat.entry_unscaled(j, zero_pos).as_rational() == 1


def test_summation_formula():
    # (S^T w)^T (S f) = w^T S S f = m^d * (w^T f), exactly
    rng = random.Random(101)
    cases = [(1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (3, 3), (3, 4)]
    done = 0
    while done < 200:
        d, m = cases[done % len(cases)]
        index = enumerate_reps(d, m)
        mat = build_matrix(index, backend="exact")
        n = len(index)
        w = {i: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for i in rng.sample(range(n), k=min(n, 3))}
        f = {i: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for i in rng.sample(range(n), k=min(n, 3))}
        stw = mat.apply_transpose_unscaled(w)
        sf = mat.apply_unscaled(f)
        lhs = CycloReal.zero(m)
        for a, b in zip(stw, sf):
            lhs = lhs + a * b
        rhs = (m**d) * sum((w.get(i, Fraction(0)) * f.get(i, Fraction(0)) for i in range(n)), Fraction(0))
        assert (lhs - CycloReal.from_rational(rhs, m)).is_zero(), (d, m, done)
        done += 1


def test_m2_entries_are_krawtchouk_values():
    # at m = 2 the representative with i ones indexes K_j(i; d)
    for d in range(1, 9):
        index = enumerate_reps(d, 2)
        assert [rep.count(1) for rep in index.reps] == list(range(d + 1))
        mat = build_matrix(index, backend="exact")
        for i in range(d + 1):
            for j in range(d + 1):
                assert mat.entry_unscaled(i, j).as_rational() == krawtchouk(j, i, d)


def test_scale_decomposition():
    assert scale_decomposition(2, 4) == (Fraction(1, 4), 1)
    assert scale_decomposition(4, 2) == (Fraction(1, 4), 1)
    assert scale_decomposition(3, 2) == (Fraction(1, 4), 2)
    assert scale_decomposition(1, 12) == (Fraction(2, 12), 3)
    for d, m in [(3, 4), (5, 9), (1, 8)]:
        q, rad = scale_decomposition(d, m)
        # (q*sqrt(rad))^2 = m^(-d)
        assert q * q * rad == Fraction(1, m**d)


def test_kernel_values():
    assert kernel(1, 0, 4) == (0, 1)
    assert kernel(1, 2, 4) == (2, 1)
    assert kernel(1, 1, 4) == (1, 2)
    assert kernel(1, 3, 6) == (3, 1)
    assert kernel(3, 2, 6) == (0, 2)
    assert kernel(2, 1, 5) == (2, 2)


def test_float_backend_inside_exact_enclosures():
    for d, m in [(2, 6), (3, 5), (2, 12)]:
        index = enumerate_reps(d, m)
        fmat = build_matrix(index, backend="float64")
        emat = build_matrix(index, backend="exact")
        scale = sqrt_enclosure(emat.scale_rad, 80).scale(emat.scale_num)
        rng = random.Random(5)
        n = len(index)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(40)]
        for i, j in pairs:
            enc = emat.entry_unscaled(i, j).enclosure(80) * scale
            assert float(enc.lo) - 1e-9 <= fmat.entry(i, j) <= float(enc.hi) + 1e-9


def test_entry_scaled_needs_rational_scale():
    # m = 6, d = 3 has scale 6^(-3/2), which is irrational
    mat = build_matrix(enumerate_reps(3, 6), backend="exact")
    with pytest.raises(ValueError):
        mat.entry_scaled(0, 0)
    even = build_matrix(enumerate_reps(2, 4), backend="exact")
    assert even.entry_scaled(0, 0).as_rational() == Fraction(1, 4)
    # m = 4 keeps a rational scale even in odd dimension: 4^(-3/2) = 1/8
    odd_sq = build_matrix(enumerate_reps(3, 4), backend="exact")
    assert odd_sq.entry_scaled(0, 0).as_rational() == Fraction(1, 8)


def test_backend_guards():
    index = enumerate_reps(2, 4)
    fmat = build_matrix(index, backend="float64")
    with pytest.raises(ValueError):
        fmat.entry_unscaled(0, 0)
    emat = build_matrix(index, backend="exact")
    with pytest.raises(ValueError):
        emat.entry(0, 0)
    with pytest.raises(ValueError):
        build_matrix(index, backend="mystery")
    with pytest.raises(ValueError):
        build_matrix(index, backend="float64", capacity=4)
    with pytest.raises(ValueError):
        build_matrix(index, backend="exact", capacity=4).to_unscaled_matrix()
