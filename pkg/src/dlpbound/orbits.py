"""Orbit combinatorics for Z_m^d under signed coordinate permutations.

The group acting is the hyperoctahedral group: all permutations of the d
coordinates composed with independent sign flips x_i -> -x_i (signs taken
mod m).  Every orbit contains exactly one weakly increasing tuple

    0 <= x_1 <= x_2 <= ... <= x_d <= floor(m/2),

which we use as the canonical representative.  The number of orbits is
therefore C(d + floor(m/2), d), and the size of the orbit of a canonical
tuple is

    d! / prod_v mult(v)!  *  2^k,

where mult(v) counts repeated coordinate values and k is the number of
coordinates with 0 < x_i < m/2.  Coordinates equal to 0, and to m/2 when
m is even, are fixed by negation mod m and contribute no sign factor.

Squared norms are taken with coordinates embedded as the centered residues
in (-m/2, m/2], so a canonical tuple's norm is just the sum of squares of
its entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .exactnum.values import square_split

__all__ = [
    "Params",
    "OrbitIndex",
    "canonicalize",
    "orbit_size",
    "norm_sq",
    "enumerate_reps",
]


@dataclass(frozen=True)
class Params:
    """Problem parameters: ambient torus Z_m^d and squared radius r2.

    The discrete problem only bounds the continuous one when the torus is
    wide enough to separate sphere centers, which is the condition
    m >= 2r, i.e. 4*r2 <= m*m.
    """

    d: int
    m: int
    r2: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.m < 2:
            raise ValueError(f"modulus must be >= 2, got {self.m}")
        if self.r2 < 1:
            raise ValueError(f"squared radius must be >= 1, got {self.r2}")
        if 4 * self.r2 > self.m * self.m:
            raise ValueError(
                f"need 4*r2 <= m^2 (torus at least twice the packing radius); "
                f"got r2={self.r2}, m={self.m}"
            )

    @property
    def mu0_is_rational(self) -> bool:
        """Whether (r/2)^d = (sqrt(r2)/2)^d is rational."""
        return self.d % 2 == 0 or math.isqrt(self.r2) ** 2 == self.r2

    def mu0_exact(self) -> tuple[Fraction, int]:
        """(r/2)^d written as q * sqrt(s) with s squarefree (s = 1 if rational)."""
        d, r2 = self.d, self.r2
        if d % 2 == 0:
            return Fraction(r2 ** (d // 2), 2**d), 1
        root = math.isqrt(r2)
        if root * root == r2:
            return Fraction(root**d, 2**d), 1
        sq, rad = square_split(r2)
        # r^d = r2^((d-1)/2) * sqrt(r2) and sqrt(r2) = sq*sqrt(rad)
        return Fraction(r2 ** ((d - 1) // 2) * sq, 2**d), rad

    def mu0_float(self) -> float:
        return (math.sqrt(self.r2) / 2.0) ** self.d


def canonicalize(vector, m: int) -> tuple[int, ...]:
    """Canonical representative of the orbit of `vector` in Z_m^d.

    Coordinates are reduced to centered residues, replaced by their
    absolute values, and sorted.
    """
    out = []
    half = m // 2
    for x in vector:
        c = x % m
        if 2 * c > m:
            c = m - c
        if c > half:  # cannot happen; guard against reduction bugs
            raise AssertionError("centered residue out of range")
        out.append(c)
    out.sort()
    return tuple(out)


def _check_canonical(rep, m: int):
    half = m // 2
    prev = 0
    for x in rep:
        if not (prev <= x <= half):
            raise ValueError(f"not a canonical representative for m={m}: {tuple(rep)}")
        prev = x


def orbit_size(rep, m: int) -> int:
    """Number of points of Z_m^d in the orbit of a canonical representative."""
    _check_canonical(rep, m)
    size = math.factorial(len(rep))
    counts: dict[int, int] = {}
    signs = 0
    for x in rep:
        counts[x] = counts.get(x, 0) + 1
        if 0 < 2 * x < m:
            signs += 1
    for c in counts.values():
        size //= math.factorial(c)
    return size << signs


def norm_sq(rep) -> int:
    """Squared Euclidean norm of the centered representative."""
    return sum(x * x for x in rep)


@dataclass
class OrbitIndex:
    """Enumerated orbit representatives of Z_m^d with cached per-orbit data.

    `reps` is sorted lexicographically; `index` maps a canonical tuple back
    to its position.  Raw vectors can be located via canonicalize().
    """

    d: int
    m: int
    reps: tuple[tuple[int, ...], ...]
    orbit_sizes: tuple[int, ...]
    norm_sqs: tuple[int, ...]
    index: dict = field(repr=False)

    def __len__(self):
        return len(self.reps)

    def position(self, vector) -> int:
        """Index of the orbit containing an arbitrary vector of Z_m^d."""
        return self.index[canonicalize(vector, self.m)]


def enumerate_reps(d: int, m: int, max_reps: int = 10**7) -> OrbitIndex:
    """All canonical orbit representatives of Z_m^d in lexicographic order."""
    if d < 1 or m < 2:
        raise ValueError("need d >= 1 and m >= 2")
    half = m // 2
    total = math.comb(d + half, d)
    if total > max_reps:
        raise ValueError(
            f"orbit census C({d}+{half},{d}) = {total} exceeds capacity {max_reps}"
        )
    reps = tuple(combinations_with_replacement(range(half + 1), d))
    sizes = tuple(orbit_size(r, m) for r in reps)
    norms = tuple(norm_sq(r) for r in reps)
    index = {r: i for i, r in enumerate(reps)}
    return OrbitIndex(d=d, m=m, reps=reps, orbit_sizes=sizes, norm_sqs=norms, index=index)
