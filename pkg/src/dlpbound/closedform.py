"""Closed-form dual certificates at modulus four.

For m = 4 and r = 2 the discrete dual program admits hand-checkable
optima supported on a handful of orbits.  With representatives written
as patterns (0^a, 1^b, 2^c), a + b + c = d, the tables below give the
dual transform vector lambda on those patterns; every certificate here
yields the exact bound 2^(-d) * lambda_0.

Two families are provided.  explicit_lambda covers d in 9..12 with
tables whose objectives are 1/20, 1/24, 1/24, 1/24.  general_odd_lambda
covers every odd d = 2k+1 >= 5 with the five-entry vector

    lambda_0 = lambda_(2^d)                 = 2^(2k-1)/(k+1)
    lambda_(0^k,2^(k+1)) = lambda_(0^(k+1),2^k) = k   * 2^(2k-1)/(k+1)
    lambda_(0^k,1,2^k)                      = (2k+2) * 2^(2k-1)/(k+1)

whose objective is 1/(2(d+1)).  The induced dual variables mu = F^T
lambda collapse, orbit by orbit, to an explicit expression in binary
Krawtchouk polynomials K_j(i; n); closed_form_mu evaluates it directly
so the matrix-free values can be cross-checked against the exact
symmetrized transform.  certificate_from_lambda performs that exact
conversion and packages the result as a verifiable DualCertificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certify import DualCertificate
from .exactnum import BoundValue
from .orbits import OrbitIndex, Params, enumerate_reps
from .symdft import SymDFTMatrix

__all__ = [
    "binom",
    "krawtchouk",
    "LambdaTable",
    "general_odd_lambda",
    "explicit_lambda",
    "closed_form_mu",
    "certificate_from_lambda",
]


def binom(n: int, k: int) -> int:
    """Binomial coefficient extended by zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def krawtchouk(j: int, i: int, n: int) -> int:
    """Binary Krawtchouk polynomial K_j(i; n) = sum_l (-1)^l C(i,l) C(n-i,j-l)."""
    if n < 0 or not 0 <= i <= n or not 0 <= j <= n:
        raise ValueError(f"krawtchouk needs 0 <= i,j <= n, got j={j} i={i} n={n}")
    return sum(
        (-1) ** ell * binom(i, ell) * binom(n - i, j - ell) for ell in range(j + 1)
    )


Pattern = tuple[int, int, int]


@dataclass(frozen=True)
class LambdaTable:
    """Sparse dual transform vector on Z_4^d orbits, keyed by (a, b, c)
    meaning the representative (0^a, 1^b, 2^c)."""

    d: int
    entries: dict[Pattern, Fraction]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        clean: dict[Pattern, Fraction] = {}
        for pattern, value in sorted(self.entries.items()):
            a, b, c = (int(v) for v in pattern)
            if min(a, b, c) < 0 or a + b + c != self.d:
                raise ValueError(f"pattern {pattern} is not a composition of {self.d}")
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"negative lambda entry {value} at {pattern}")
            if value:
                clean[(a, b, c)] = value
        if (self.d, 0, 0) not in clean:
            raise ValueError("lambda_0 must be positive to certify a bound")
        object.__setattr__(self, "entries", clean)

    @staticmethod
    def rep(pattern: Pattern) -> tuple[int, ...]:
        a, b, c = pattern
        return (0,) * a + (1,) * b + (2,) * c

    def lambda0(self) -> Fraction:
        return self.entries[(self.d, 0, 0)]

    def objective(self) -> Fraction:
        # 4^(-d/2) lambda_0; the scale is exactly 2^(-d).
        return self.lambda0() / 2**self.d

    def weights(self, index: OrbitIndex) -> dict[int, Fraction]:
        """Entries re-keyed by position in an orbit index for transforms."""
        if (index.d, index.m) != (self.d, 4):
            raise ValueError("orbit index does not match the table (m must be 4)")
        return {
            index.position(self.rep(pattern)): value
            for pattern, value in self.entries.items()
        }


def general_odd_lambda(d: int) -> LambdaTable:
    """The five-entry dual vector valid in every odd dimension d >= 5."""
    if d < 5 or d % 2 == 0:
        raise ValueError("the general construction needs odd d >= 5")
    k = (d - 1) // 2
    base = Fraction(2 ** (2 * k - 1), k + 1)
    return LambdaTable(
        d=d,
        entries={
            (d, 0, 0): base,
            (0, 0, d): base,
            (k, 0, k + 1): k * base,
            (k + 1, 0, k): k * base,
            (k, 1, k): (2 * k + 2) * base,
        },
    )


_EXPLICIT: dict[int, dict[Pattern, Fraction]] = {
    9: {
        (9, 0, 0): Fraction(128, 5),
        (0, 0, 9): Fraction(128, 5),
        (4, 0, 5): Fraction(1152, 5),
        (5, 0, 4): Fraction(1152, 5),
    },
    10: {
        (10, 0, 0): Fraction(128, 3),
        (0, 0, 10): Fraction(128, 3),
        (4, 2, 4): Fraction(2560, 3),
        (5, 0, 5): Fraction(256, 3),
    },
    11: {
        (11, 0, 0): Fraction(256, 3),
        (0, 0, 11): Fraction(256, 3),
        (5, 0, 6): Fraction(1280, 3),
        (6, 0, 5): Fraction(1280, 3),
        (5, 1, 5): Fraction(1024),
    },
    12: {
        (12, 0, 0): Fraction(512, 3),
        (0, 0, 12): Fraction(512, 3),
        (6, 0, 6): Fraction(11264, 3),
    },
}


def explicit_lambda(d: int) -> LambdaTable:
    """Hand-optimized dual vectors for d in 9..12."""
    if d not in _EXPLICIT:
        raise ValueError(f"no explicit table for d={d}; have {sorted(_EXPLICIT)}")
    return LambdaTable(d=d, entries=dict(_EXPLICIT[d]))


def closed_form_mu(a: int, b: int, c: int, k: int) -> Fraction:
    """Dual variable mu at the orbit (0^a, 1^b, 2^c) induced by
    general_odd_lambda(2k+1), as a single Krawtchouk expression.

    The value vanishes for odd b: the (0^k,2^(k+1)) and (0^(k+1),2^k)
    contributions cancel in pairs and K_b(k; 2k) = 0 there.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    if min(a, b, c) < 0 or a + b + c != 2 * k + 1:
        raise ValueError(f"({a},{b},{c}) is not a composition of {2 * k + 1}")
    if b % 2 == 1:
        return Fraction(0)
    bracket = 2 * binom(a + c, a) * (
        binom(2 * k + 1, b) + k * krawtchouk(b, k, 2 * k + 1)
    )
    bracket += (
        (2 * k + 2)
        * (binom(a + c - 1, c) - binom(a + c - 1, a))
        * krawtchouk(b, k, 2 * k)
    )
    return Fraction(2**b * bracket, 4 * (k + 1))


def certificate_from_lambda(
    table: LambdaTable, matrix: SymDFTMatrix | None = None
) -> DualCertificate:
    """Convert a lambda table into the dual certificate mu = F^T lambda,
    computed in exact arithmetic through the symmetrized transform.

    Raises ArithmeticError if the conversion does not produce a feasible
    certificate (mu_0 = 1, zeros strictly inside radius 2, mu >= 0);
    the supplied tables are theorems, so a failure means corruption.
    """
    d = table.d
    if matrix is None:
        matrix = SymDFTMatrix(enumerate_reps(d, 4), backend="exact")
    index = matrix.index
    if matrix.backend != "exact" or (index.d, index.m) != (d, 4):
        raise ValueError("need an exact-backend matrix over Z_4^d")
    weights = table.weights(index)
    scale = Fraction(1, 2**d)
    mu: dict[tuple[int, ...], Fraction] = {}
    for j, rep in enumerate(index.reps):
        # The suffix memo inside column_weighted_sum is only valid within
        # a single column, so no memo is shared across j.
        value = matrix.column_weighted_sum(weights, j).as_rational()
        if value is None:
            raise ArithmeticError(f"transform of lambda is irrational at {rep}")
        value *= scale
        n2 = sum(v * v for v in rep)
        if n2 == 0:
            if value != 1:
                raise ArithmeticError(f"mu_0 = {value} != 1 = (r/2)^d")
            continue
        if n2 < 4:
            if value != 0:
                raise ArithmeticError(f"mu at {rep} inside radius must vanish, got {value}")
            continue
        if value < 0:
            raise ArithmeticError(f"negative mu {value} at {rep}")
        if value:
            mu[rep] = value
    return DualCertificate(
        params=Params(d=d, m=4, r2=4),
        mu=mu,
        provenance="closed-form",
        claimed_objective=BoundValue({1: table.objective()}),
    )
