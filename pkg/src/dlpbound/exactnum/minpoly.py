"""Integer polynomial helpers: cyclotomic polynomials and the minimal
polynomial of 2*cos(2*pi/m).

Polynomials are tuples of int coefficients in ascending degree order.
The m-th cyclotomic polynomial is computed by exact division of z^m - 1
by the cyclotomic polynomials of the proper divisors of m.  For m >= 3
the minimal polynomial of c = 2*cos(2*pi/m) has degree phi(m)/2 and is
read off from the palindromic coefficients of Phi_m: writing
Phi_m(z) = z^n * Q(z + 1/z) with n = phi(m)/2, the polynomial Q is
assembled in the basis of the degree-k polynomials D_k satisfying
D_k(z + 1/z) = z^k + z^(-k)  (D_0 = 2, D_1 = x, D_{k+1} = x*D_k - D_{k-1}),
and Q is the minimal polynomial sought.
"""

from __future__ import annotations

import functools

__all__ = ["cyclotomic_poly", "cos2pi_minpoly", "poly_eval_fraction"]


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of an exact division of integer polynomials (monic-led den)."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] not in (1, -1):
        raise ValueError("divisor must have unit leading coefficient")
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] * den[-1]
        q[i - dn] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dn + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("division was not exact")
    return q


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # z^n - 1
    q = list(poly)
    for d in range(1, n):
        if n % d == 0:
            q = _poly_divmod_exact(q, list(cyclotomic_poly(d)))
    return tuple(q)


@functools.lru_cache(maxsize=None)
def cos2pi_minpoly(m: int) -> tuple[int, ...]:
    """Minimal polynomial of 2*cos(2*pi/m) over Q, monic with int coefficients."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return (-2, 1)  # value 2
    if m == 2:
        return (2, 1)  # value -2
    phi = cyclotomic_poly(m)
    n = (len(phi) - 1) // 2
    # D_k polynomials with D_k(z+1/z) = z^k + z^-k
    d_prev, d_cur = [2], [0, 1]
    out = [0] * (n + 1)
    out[0] = phi[n]
    for k in range(1, n + 1):
        c = phi[n + k]
        if c:
            for j, dj in enumerate(d_cur):
                out[j] += c * dj
        if k < n:
            d_prev, d_cur = d_cur, [
                (d_cur[j - 1] if j >= 1 else 0) - (d_prev[j] if j < len(d_prev) else 0)
                for j in range(k + 2)
            ]
    if out[-1] != 1:
        raise AssertionError("minimal polynomial not monic")
    return tuple(out)


def poly_eval_fraction(poly, x):
    """Horner evaluation of an integer/rational polynomial at x."""
    acc = 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc
