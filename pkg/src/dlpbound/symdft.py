"""Symmetrized discrete Fourier transform on orbit representatives.

For canonical representatives x, y of Z_m^d under signed permutations,
the matrix entry is

    F[x][y] = m^(-d/2) * S[x][y],    S[x][y] = sum_{z ~ y} e^(-2*pi*i*<x,z>/m),

the inner sum running over the orbit of y.  S[x][y] is a rational
integer combination of m-th roots of unity and is computed exactly by a
contingency-table dynamic program: walk the coordinates of x in order,
and at each coordinate choose which remaining value of the multiset of
|y|-values it is matched with, multiplying by that coordinate's kernel

    v = 0:        1
    2v = m:       zeta^(u*m/2)            (the value -m/2 is the same residue)
    otherwise:    zeta^(u*v) + zeta^(-u*v)

with u the coordinate of x and zeta = e^(-2*pi*i/m).  The memo key is
(remaining x suffix, remaining value counts), so the work is shared both
inside one entry and across entries in the same column.  Exact values
are integer vectors over the exponent basis zeta^0..zeta^(m-1), folded
into Q(cos(2*pi/m)) at the end; the float backend runs the same
recursion on scalar kernel values.

Useful closed forms (used for cross-checks, not special-cased here):
row x = 0 has S[0][y] = |orbit(y)| and column y = 0 has S[x][0] = 1.
The scaled matrix F is an involution: F(Fw) = w.

The scale m^(-d/2) is kept separate from S because it is rational only
for even d; in general m^(-d/2) = scale_num * sqrt(scale_rad) with
scale_rad the squarefree part of m for odd d.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from .exactnum.cyclo import CycloReal
from .exactnum.values import square_split
from .orbits import OrbitIndex

__all__ = [
    "kernel",
    "entry_exp_ints",
    "entry_float",
    "build_matrix",
    "SymDFTMatrix",
    "scale_decomposition",
]

_FLOAT_CAPACITY = 2 * 10**7
_EXACT_CAPACITY = 10**5


def kernel(u: int, v: int, m: int) -> tuple[int, int]:
    """Kernel of the entry recursion as (cosine index, multiplier):
    the value is multiplier * cos(2*pi*u*v/m) with multiplier 2 except
    at the sign-fixed values v = 0 and v = m/2, where it is 1."""
    t = (u * v) % m
    if v % m == 0 or (2 * v) % m == 0:
        return (t, 1)
    return (t, 2)


def _value_counts(rep) -> tuple[tuple[int, ...], tuple[int, ...]]:
    vals, counts = [], []
    for x in rep:
        if vals and vals[-1] == x:
            counts[-1] += 1
        else:
            vals.append(x)
            counts.append(1)
    return tuple(vals), tuple(counts)


def _rot(vec: tuple, t: int, m: int) -> tuple:
    """Index rotation: out[i] = vec[(i - t) mod m], i.e. multiply by zeta^t."""
    if t == 0:
        return vec
    k = m - t
    return vec[k:] + vec[:k]


def entry_exp_ints(x, y, m: int, memo=None) -> tuple[int, ...]:
    """S[x][y] as integer coefficients over the basis zeta^0..zeta^(m-1).

    `memo` may be shared between calls with the same y (and m) to reuse
    suffix work across a column.
    """
    vs, gamma = _value_counts(y)
    if memo is None:
        memo = {}
    return _exp_dp(tuple(x), gamma, vs, m, memo)


def _exp_dp(suffix, rem, vs, m, memo):
    key = (suffix, rem)
    got = memo.get(key)
    if got is not None:
        return got
    if not suffix:
        vec = (1,) + (0,) * (m - 1)
        memo[key] = vec
        return vec
    u = suffix[0]
    tail = suffix[1:]
    parts = []
    for j, v in enumerate(vs):
        if not rem[j]:
            continue
        nrem = rem[:j] + (rem[j] - 1,) + rem[j + 1 :]
        sub = _exp_dp(tail, nrem, vs, m, memo)
        t = (u * v) % m
        parts.append(_rot(sub, t, m))
        if v % m != 0 and (2 * v) % m != 0:
            parts.append(_rot(sub, m - t, m))
    if len(parts) == 1:
        vec = parts[0]
    else:
        vec = tuple(map(sum, zip(*parts)))
    memo[key] = vec
    return vec


def entry_float(x, y, m: int, kern=None, memo=None) -> float:
    """S[x][y] as a float, by the same recursion on scalar kernels."""
    vs, gamma = _value_counts(y)
    if kern is None:
        kern = _kernel_table(vs, m)
    if memo is None:
        memo = {}
    return _float_dp(tuple(x), gamma, vs, kern, memo)


def _kernel_table(vs, m: int):
    tab = {}
    for u in range(m // 2 + 1):
        row = []
        for v in vs:
            t, mult = kernel(u, v, m)
            row.append(mult * math.cos(2.0 * math.pi * t / m))
        tab[u] = tuple(row)
    return tab


def _float_dp(suffix, rem, vs, kern, memo):
    key = (suffix, rem)
    got = memo.get(key)
    if got is not None:
        return got
    if not suffix:
        memo[key] = 1.0
        return 1.0
    u = suffix[0]
    tail = suffix[1:]
    krow = kern[u]
    acc = 0.0
    for j in range(len(vs)):
        if rem[j]:
            nrem = rem[:j] + (rem[j] - 1,) + rem[j + 1 :]
            acc += krow[j] * _float_dp(tail, nrem, vs, kern, memo)
    memo[key] = acc
    return acc


def scale_decomposition(d: int, m: int) -> tuple[Fraction, int]:
    """m^(-d/2) written as q * sqrt(s), s squarefree (s = 1 for even d)."""
    if d % 2 == 0:
        return Fraction(1, m ** (d // 2)), 1
    sq, rad = square_split(m)
    # m^(-d/2) = m^(-(d+1)/2) * sqrt(m) and sqrt(m) = sq*sqrt(rad)
    return Fraction(sq, m ** ((d + 1) // 2)), rad


def exp_to_cyclo(vec, m: int) -> CycloReal:
    """Fold an exponent-basis vector (over zeta^t) into the cosine basis."""
    return CycloReal.from_exp_vector(m, vec)


class SymDFTMatrix:
    """Symmetrized DFT matrix over the representatives of an OrbitIndex.

    backend='float64' stores the scaled matrix F densely as numpy;
    backend='exact' computes unscaled integer-cyclotomic entries on
    demand and exposes the scale decomposition m^(-d/2) = num*sqrt(rad).
    """

    def __init__(self, index: OrbitIndex, backend: str = "float64",
                 capacity: int | None = None):
        if backend not in ("float64", "exact"):
            raise ValueError(f"unknown backend {backend!r}")
        self.index = index
        self.backend = backend
        self.n = len(index)
        self.scale_num, self.scale_rad = scale_decomposition(index.d, index.m)
        cells = self.n * self.n
        if backend == "float64":
            cap = capacity if capacity is not None else _FLOAT_CAPACITY
            if cells > cap:
                raise ValueError(f"dense float matrix of {cells} cells exceeds capacity {cap}")
            self.array = _build_float_array(index)
        else:
            self._cap = capacity if capacity is not None else _EXACT_CAPACITY
            self._cells = cells

    # -- float backend --------------------------------------------------

    def entry(self, i: int, j: int) -> float:
        """Scaled entry F[i][j] (float backend only)."""
        self._need("float64")
        return float(self.array[i, j])

    def apply(self, vec):
        self._need("float64")
        return self.array @ np.asarray(vec, dtype=np.float64)

    def apply_transpose(self, vec):
        self._need("float64")
        return self.array.T @ np.asarray(vec, dtype=np.float64)

    # -- exact backend ---------------------------------------------------

    @property
    def scale_sq(self) -> Fraction:
        """Exact value of (m^(-d/2))^2 = m^(-d)."""
        return self.scale_num * self.scale_num * self.scale_rad

    def entry_unscaled(self, i: int, j: int, memo=None) -> CycloReal:
        """Exact S[i][j]; the scaled entry is scale_num*sqrt(scale_rad) times this."""
        self._need("exact")
        idx = self.index
        vec = entry_exp_ints(idx.reps[i], idx.reps[j], idx.m, memo)
        return exp_to_cyclo(vec, idx.m)

    def entry_scaled(self, i: int, j: int) -> CycloReal:
        """Exact F[i][j] when the scale is rational (even d)."""
        self._need("exact")
        if self.scale_rad != 1:
            raise ValueError("scale is irrational for odd d; use entry_unscaled")
        return self.entry_unscaled(i, j).scale(self.scale_num)

    def column_weighted_sum(self, weights: dict[int, Fraction], j: int,
                            memo=None) -> CycloReal:
        """Exact sum_i weights[i] * S[i][j] over the sparse weight dict."""
        self._need("exact")
        idx = self.index
        m = idx.m
        y = idx.reps[j]
        vs, gamma = _value_counts(y)
        if memo is None:
            memo = {}
        acc = [Fraction(0)] * m
        for i, w in weights.items():
            if not w:
                continue
            vec = _exp_dp(idx.reps[i], gamma, vs, m, memo)
            for t in range(m):
                c = vec[t]
                if c:
                    acc[t] += w * c
        return exp_to_cyclo(acc, m)

    def apply_transpose_unscaled(self, weights: dict[int, Fraction]):
        """Exact (S^T w)_j for all columns j, as a list of CycloReal."""
        self._need("exact")
        return [self.column_weighted_sum(weights, j) for j in range(self.n)]

    def apply_unscaled(self, weights: dict[int, Fraction]):
        """Exact (S w)_i for all rows i, via the orbit-size symmetry
        |orbit(x)| * S[x][y] = |orbit(y)| * S[y][x]."""
        self._need("exact")
        idx = self.index
        m = idx.m
        out = []
        for i in range(self.n):
            vs, gamma = _value_counts(idx.reps[i])
            memo = {}
            acc = [Fraction(0)] * m
            oi = idx.orbit_sizes[i]
            for j, w in weights.items():
                if not w:
                    continue
                vec = _exp_dp(idx.reps[j], gamma, vs, m, memo)
                scale = w * Fraction(idx.orbit_sizes[j], oi)
                for t in range(m):
                    c = vec[t]
                    if c:
                        acc[t] += scale * c
            out.append(exp_to_cyclo(acc, m))
        return out

    def to_unscaled_matrix(self):
        """Dense exact S as nested lists of CycloReal (small instances)."""
        self._need("exact")
        if self._cells > self._cap:
            raise ValueError(f"dense exact matrix of {self._cells} cells exceeds capacity {self._cap}")
        idx = self.index
        rows = []
        cols_memo = [dict() for _ in range(self.n)]
        for i in range(self.n):
            row = []
            for j in range(self.n):
                vec = entry_exp_ints(idx.reps[i], idx.reps[j], idx.m, cols_memo[j])
                row.append(exp_to_cyclo(vec, idx.m))
            rows.append(row)
        return rows

    def _need(self, backend: str):
        if self.backend != backend:
            raise ValueError(f"operation requires backend={backend!r}, have {self.backend!r}")


def _column_float(args):
    reps, m, j, scale = args
    y = reps[j]
    vs, gamma = _value_counts(y)
    kern = _kernel_table(vs, m)
    memo = {}
    return j, [scale * _float_dp(x, gamma, vs, kern, memo) for x in reps]


def _build_float_array(index: OrbitIndex) -> np.ndarray:
    n = len(index)
    m = index.m
    scale = float(m) ** (-index.d / 2.0)
    out = np.empty((n, n), dtype=np.float64)
    threads = int(os.environ.get("DLPBOUND_THREADS", "1") or "1")
    if threads > 1 and n >= 64:
        import multiprocessing as mp

        with mp.Pool(threads) as pool:
            for j, col in pool.imap_unordered(
                _column_float, ((index.reps, m, j, scale) for j in range(n)), chunksize=8
            ):
                out[:, j] = col
    else:
        for j in range(n):
            _, col = _column_float((index.reps, m, j, scale))
            out[:, j] = col
    return out


def build_matrix(index: OrbitIndex, backend: str = "float64",
                 capacity: int | None = None) -> SymDFTMatrix:
    """Construct the symmetrized DFT matrix for the given representatives."""
    return SymDFTMatrix(index, backend=backend, capacity=capacity)
