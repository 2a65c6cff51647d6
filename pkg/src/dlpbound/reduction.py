"""Folding integer-lattice functions onto Z_m^d.

A finitely supported g: Z^d -> Q descends to the finite group Z_m^d by
summing over translates, g_m(x) = sum of g(x + m*n) over n in Z^d.  Two
exact facts make this reduction useful for packing bounds.  First, the
discrete Fourier transform of the folded function is a restriction of
the trigonometric polynomial of g: the transform of g_m at y equals
m^(-d/2) * ghat(y/m), where ghat(theta) = sum_x g(x) e^(-2*pi*i<x,theta>).
Both sides live in the real cyclotomic field of order m, so the identity
is checked here exactly, not numerically.  Second, feasibility survives
the quotient: if g is nonpositive at radius r and beyond, has mass at
least one, and ghat is nonnegative at the m-division points, then for
m >= 2r the folded g_m satisfies the finite linear program constraints
(nonpositive outside radius r in the centered metric, nonnegative
transform, mass at least one), because every translate of a far point
stays far.  The helpers below expose the fold, the identity check with
an explicit witness on failure, and the discrete feasibility check used
to exercise that transport on constructed inputs.

Inputs start at the Z^d level; continuous functions are out of scope
because certified tail control for them is a separate problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import CycloReal
from .orbits import canonicalize, enumerate_reps, orbit_size

__all__ = [
    "LatticeFn",
    "FoldedFn",
    "IdentityReport",
    "FeasibilityReport",
    "centered",
    "fold",
    "autocorrelation",
    "check_restriction_identity",
    "discrete_feasibility",
]


def centered(v: int, m: int) -> int:
    """The residue of v modulo m lying in (-m/2, m/2]."""
    r = v % m
    if 2 * r > m:
        r -= m
    return r


@dataclass(frozen=True)
class LatticeFn:
    """Finitely supported rational function on Z^d."""

    d: int
    support: dict[tuple[int, ...], Fraction]
    even: bool = True

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        clean: dict[tuple[int, ...], Fraction] = {}
        for point, value in self.support.items():
            point = tuple(int(v) for v in point)
            if len(point) != self.d:
                raise ValueError(f"support point {point} has wrong dimension")
            value = Fraction(value)
            if value:
                clean[point] = value
        if self.even:
            for point, value in clean.items():
                neg = tuple(-v for v in point)
                if clean.get(neg) != value:
                    raise ValueError(
                        f"function marked even but g({neg}) != g({point})"
                    )
        object.__setattr__(self, "support", clean)

    def value(self, point) -> Fraction:
        return self.support.get(tuple(int(v) for v in point), Fraction(0))

    def total_mass(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))

    def support_radius_sq(self) -> int:
        return max((sum(v * v for v in p) for p in self.support), default=0)


@dataclass(frozen=True)
class FoldedFn:
    """Values of a folded function on Z_m^d, stored on centered residues."""

    d: int
    m: int
    values: dict[tuple[int, ...], Fraction]

    def __post_init__(self):
        if self.d < 1 or self.m < 2:
            raise ValueError("need d >= 1 and m >= 2")
        clean: dict[tuple[int, ...], Fraction] = {}
        for point, value in self.values.items():
            if len(point) != self.d:
                raise ValueError(f"point {point} has wrong dimension")
            key = tuple(centered(int(v), self.m) for v in point)
            clean[key] = clean.get(key, Fraction(0)) + Fraction(value)
        object.__setattr__(
            self, "values", {k: v for k, v in sorted(clean.items()) if v}
        )

    def at(self, point) -> Fraction:
        key = tuple(centered(int(v), self.m) for v in point)
        return self.values.get(key, Fraction(0))

    def total_mass(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def symmetrize(self) -> dict[tuple[int, ...], Fraction]:
        """Orbit averages under coordinate permutations and sign flips,
        keyed by canonical representative.  Representatives whose orbit
        average is zero are omitted."""
        sums: dict[tuple[int, ...], Fraction] = {}
        for point, value in self.values.items():
            rep = canonicalize(point, self.m)
            sums[rep] = sums.get(rep, Fraction(0)) + value
        out: dict[tuple[int, ...], Fraction] = {}
        for rep, total in sorted(sums.items()):
            avg = total / orbit_size(rep, self.m)
            if avg:
                out[rep] = avg
        return out

    def dft_unscaled(self, y) -> CycloReal:
        """sum_x g_m(x) e^(-2*pi*i<x,y>/m), exact in the order-m field.
        The folded function must be even (true for folds of even input),
        otherwise the value is not real and this raises ValueError."""
        m = self.m
        vec = [Fraction(0)] * m
        for point, value in self.values.items():
            t = (-sum(a * b for a, b in zip(point, y))) % m
            vec[t] += value
        return CycloReal.from_exp_vector(m, vec)


def fold(g: LatticeFn, m: int) -> FoldedFn:
    """g_m(x) = sum over n in Z^d of g(x + m*n), collected exactly."""
    if m < 1:
        raise ValueError("modulus must be positive")
    values: dict[tuple[int, ...], Fraction] = {}
    for point, value in g.support.items():
        key = tuple(centered(v, m) for v in point)
        values[key] = values.get(key, Fraction(0)) + value
    return FoldedFn(d=g.d, m=m, values={k: v for k, v in values.items() if v})


def autocorrelation(h: LatticeFn) -> LatticeFn:
    """g(x) = sum_u h(u) h(u+x).  Always even, and ghat = |hhat|^2 >= 0
    everywhere, which makes g a ready-made feasible input."""
    support: dict[tuple[int, ...], Fraction] = {}
    for u, hu in h.support.items():
        for w, hw in h.support.items():
            x = tuple(b - a for a, b in zip(u, w))
            support[x] = support.get(x, Fraction(0)) + hu * hw
    return LatticeFn(d=h.d, support=support, even=True)


def ghat_at_division_point(g: LatticeFn, y, m: int) -> CycloReal:
    """ghat(y/m) = sum_x g(x) e^(-2*pi*i<x,y>/m) in the order-m field."""
    vec = [Fraction(0)] * m
    for point, value in g.support.items():
        t = (-sum(a * b for a, b in zip(point, y))) % m
        vec[t] += value
    return CycloReal.from_exp_vector(m, vec)


@dataclass(frozen=True)
class IdentityReport:
    ok: bool
    m: int
    checked: int
    witness: tuple[int, ...] | None = None
    detail: str = ""

    def render(self) -> str:
        if self.ok:
            return f"restriction identity holds at all {self.checked} representatives (m={self.m})"
        return f"restriction identity FAILS at y={self.witness} (m={self.m}): {self.detail}"


def check_restriction_identity(g: LatticeFn, m: int, precision: int = 30) -> IdentityReport:
    """Confirm, representative by representative, that the transform of
    fold(g, m) coincides with ghat at the corresponding division point.

    The comparison is exact; a failure signals an implementation bug and
    is reported with the witness y and decimal renderings of both sides
    to `precision` digits.
    """
    if not g.even:
        raise ValueError("the identity check expects an even function")
    folded = fold(g, m)
    index = enumerate_reps(g.d, m)
    for rep in index.reps:
        lhs = folded.dft_unscaled(rep)
        rhs = ghat_at_division_point(g, rep, m)
        if lhs != rhs:
            bits = max(64, 4 * precision)
            digits = min(precision, 17)
            left = lhs.enclosure(bits).mid_float()
            right = rhs.enclosure(bits).mid_float()
            return IdentityReport(
                ok=False,
                m=m,
                checked=len(index),
                witness=rep,
                detail=f"fold side {left:.{digits}g}, direct side {right:.{digits}g}",
            )
    return IdentityReport(ok=True, m=m, checked=len(index))


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    detail: str = ""


def discrete_feasibility(folded: FoldedFn, r2: int) -> FeasibilityReport:
    """Check the finite program constraints for a folded function:
    mass at least one, g_m nonpositive at centered norm >= r2, and a
    nonnegative transform at every point of Z_m^d (not only the
    canonical representatives, since g_m need not be symmetric)."""
    mass = folded.total_mass()
    if mass < 1:
        return FeasibilityReport(False, f"total mass {mass} < 1")
    for point, value in sorted(folded.values.items()):
        if sum(v * v for v in point) >= r2 and value > 0:
            return FeasibilityReport(False, f"g_m({point}) = {value} > 0 at norm >= r")
    for y in itertools.product(range(folded.m), repeat=folded.d):
        if folded.dft_unscaled(y).sign() < 0:
            return FeasibilityReport(False, f"transform negative at y={y}")
    return FeasibilityReport(ok=True, detail=f"mass {mass}")
