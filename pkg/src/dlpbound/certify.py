"""Exact rational certificates for the dual program.

A certificate is the data of an orbit-scaled dual vector: nonnegative
rationals mu_x on representatives with normSq >= r2.  The origin value
mu_0 = (r/2)^d is never stored (the parameters pin it, which removes it
as a tamper surface) and representatives with 0 < normSq < r2 are
implicitly zero.  Verification computes, for every representative y,
the descaled constraint value

    Lambda_y = sum_x S_xy mu_x = A_y + B_y*sqrt(r2)

with A_y, B_y in Q(cos(2*pi/m)), and decides its sign rigorously;
lambda_y = m^(-d/2)*Lambda_y has the same sign because the scale is a
positive real.  A certificate whose Lambda are all nonnegative proves
the bound

    m^(-d/2)*lambda_0 = m^(-d)*(mu_0 + sum_x mu_x),

an exact element of Q + Q*sqrt(r2), which lower-bounds the continuous
linear programming value in dimension d whenever m >= 2r.

Rounding floating solutions to certificates supports two schemes: snap
to the lattice (1/q)Z (the small-q structure some optima exhibit) and
best rational approximation with a denominator cap.  The default scans
q = 1..1000 and takes the smallest q whose worst snap distance is below
1e-8, falling back to the denominator cap 10^6.  Solving the dual with
the buffer lambda_y >= eps = 1e-10 leaves enough slack that rounding at
these resolutions preserves feasibility.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    DEFAULT_MAX_BITS,
    BoundValue,
    CycloReal,
    IndeterminateSignError,
    SurdPair,
    bound_decimal,
    parse_bound_expr,
)
from .lp import LPSolution
from .orbits import OrbitIndex, Params, canonicalize, enumerate_reps, norm_sq
from .symdft import SymDFTMatrix, build_matrix

__all__ = [
    "DualCertificate",
    "LambdaVector",
    "VerificationReport",
    "ComparisonReport",
    "KNOWN_DENSITIES",
    "rationalize",
    "compute_lambda",
    "verify",
    "objective",
    "compare_known",
    "write_certificate",
    "read_certificate",
]

REFUSE_TOL = 1e-9  # a required-nonnegative value below this is a solver failure
CLAMP_TOL = 1e-12  # negatives this close to zero are treated as zero
LATTICE_SNAP_TOL = 1e-8
DEFAULT_DENOM_CAP = 10**6
LATTICE_SCAN_MAX = 1000


@dataclass
class DualCertificate:
    """Orbit-scaled dual vector entries keyed by canonical representative."""

    params: Params
    mu: dict[tuple[int, ...], Fraction]
    provenance: str = "file"
    claimed_objective: BoundValue | None = None

    def __post_init__(self):
        d, m, r2 = self.params.d, self.params.m, self.params.r2
        clean: dict[tuple[int, ...], Fraction] = {}
        for rep, value in sorted(self.mu.items()):
            rep = tuple(int(v) for v in rep)
            if len(rep) != d:
                raise ValueError(f"representative {rep} has wrong dimension")
            if canonicalize(rep, m) != rep:
                raise ValueError(f"representative {rep} is not in canonical form")
            n2 = norm_sq(rep)
            if n2 == 0:
                raise ValueError("mu_0 is implicit and may not be stored")
            if n2 < r2:
                raise ValueError(
                    f"representative {rep} has 0 < normSq < r2 and must be zero"
                )
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"negative entry {value} at {rep}")
            if value:
                clean[rep] = value
        self.mu = clean

    def mu_sum(self) -> Fraction:
        return sum(self.mu.values(), Fraction(0))


@dataclass
class LambdaVector:
    """Descaled transform values Lambda_y = sum_x S_xy mu_x, one SurdPair
    per representative; the true lambda_y is scale_num*sqrt(scale_rad)
    times the entry, a positive multiple that preserves signs."""

    index: OrbitIndex
    entries: list[SurdPair]
    scale_num: Fraction
    scale_rad: int


@dataclass
class ComparisonReport:
    d: int
    bound: BoundValue
    best_packing: BoundValue | None
    upper_bound: BoundValue | None
    exceeds_packing: bool | None
    exceeds_upper: bool | None

    def render(self) -> str:
        if self.best_packing is None:
            return f"d={self.d}: no recorded densities to compare against"
        lines = [
            f"d={self.d}: best packing center density {self.best_packing} "
            f"~ {float(self.best_packing):.8f}",
        ]
        verdict = "exceeds" if self.exceeds_packing else "does not exceed"
        lines.append(f"  bound {verdict} the best packing density")
        verdict = "exceeds" if self.exceeds_upper else "does not exceed"
        lines.append(
            f"  bound {verdict} the density upper bound {self.upper_bound} "
            f"~ {float(self.upper_bound):.8f}"
            + (" (the continuous program cannot be sharp)" if self.exceeds_upper else "")
        )
        return "\n".join(lines)


@dataclass
class VerificationReport:
    status: str  # 'Verified' | 'Infeasible' | 'Indeterminate'
    witness: tuple | None
    detail: str
    objective: BoundValue | None
    decimal_lower_bound: str
    comparisons: ComparisonReport | None

    @property
    def ok(self) -> bool:
        return self.status == "Verified"

    def render(self) -> str:
        lines = [f"status: {self.status}"]
        if self.detail:
            lines.append(f"detail: {self.detail}")
        if self.witness is not None:
            lines.append(f"witness: {self.witness}")
        if self.objective is not None:
            lines.append(f"objective: {self.objective.serialize()}")
        # a bound is only established by a Verified certificate
        if self.ok:
            lines.append(f"decimal lower bound: {self.decimal_lower_bound}")
            if self.comparisons is not None:
                lines.append(self.comparisons.render())
        return "\n".join(lines)


# -- rounding --------------------------------------------------------------


def _parse_scheme(scheme: str | None):
    if scheme is None:
        return ("auto", None)
    kind, _, arg = scheme.partition(":")
    if kind == "lattice":
        q = int(arg)
        if q < 1:
            raise ValueError("lattice denominator must be >= 1")
        return ("lattice", q)
    if kind == "denom":
        cap = int(arg)
        if cap < 1:
            raise ValueError("denominator cap must be >= 1")
        return ("denom", cap)
    raise ValueError(f"unknown rounding scheme {scheme!r}; use lattice:q or denom:Q")


def _scan_lattice(values: list[float]) -> int | None:
    """Smallest q <= 1000 whose lattice (1/q)Z is within 1e-8 of every value."""
    for q in range(1, LATTICE_SCAN_MAX + 1):
        worst = 0.0
        for v in values:
            t = v * q
            dist = abs(t - round(t)) / q
            if dist > worst:
                worst = dist
        if worst <= LATTICE_SNAP_TOL:
            return q
    return None


def rationalize(solution: LPSolution, scheme: str | None = None) -> DualCertificate:
    """Round an optimal floating dual solution to an exact certificate."""
    if solution.status != "optimal":
        raise ValueError(f"cannot rationalize a {solution.status} solution")
    params = solution.meta.get("params")
    if params is None or solution.meta.get("kind") != "dual":
        raise ValueError("solution does not carry dual-program metadata")
    floats: dict[tuple[int, ...], float] = {}
    for rep, v in solution.values.items():
        v = float(v)
        if v < -REFUSE_TOL:
            raise ValueError(
                f"solver value {v} at {rep} is too negative to round; "
                "the solution does not satisfy nonnegativity"
            )
        if -CLAMP_TOL <= v < 0:
            v = 0.0
        floats[tuple(rep)] = v

    kind, arg = _parse_scheme(scheme)
    if kind == "auto":
        q = _scan_lattice(list(floats.values()))
        if q is not None:
            kind, arg = "lattice", q
        else:
            kind, arg = "denom", DEFAULT_DENOM_CAP

    mu: dict[tuple[int, ...], Fraction] = {}
    for rep, v in floats.items():
        if kind == "lattice":
            q = Fraction(round(v * arg), arg)
        else:
            q = Fraction(v).limit_denominator(arg)
        if q < 0:
            q = Fraction(0)
        mu[rep] = q
    return DualCertificate(params=params, mu=mu, provenance="solver-rounded")


# -- exact transform -------------------------------------------------------


def _mu_weights(cert: DualCertificate, index: OrbitIndex) -> dict[int, Fraction]:
    weights: dict[int, Fraction] = {}
    for rep, value in cert.mu.items():
        weights[index.position(rep)] = value
    return weights


def _lambda_entry(matrix: SymDFTMatrix, weights: dict[int, Fraction],
                  mu0_q: Fraction, mu0_rad: int, j: int) -> SurdPair:
    m = matrix.index.m
    memo: dict = {}
    if mu0_rad == 1:
        merged = dict(weights)
        merged[0] = merged.get(0, Fraction(0)) + mu0_q
        a = matrix.column_weighted_sum(merged, j, memo)
        return SurdPair(a, CycloReal.zero(m), 1)
    a = matrix.column_weighted_sum(weights, j, memo)
    b = matrix.column_weighted_sum({0: mu0_q}, j, memo)
    return SurdPair(a, b, mu0_rad)


def compute_lambda(cert: DualCertificate, matrix: SymDFTMatrix) -> LambdaVector:
    """Exact Lambda = S^T mu including the symbolic mu_0 = (r/2)^d term."""
    if matrix.backend != "exact":
        raise ValueError("lambda computation needs the exact matrix backend")
    index = matrix.index
    if (index.d, index.m) != (cert.params.d, cert.params.m):
        raise ValueError("matrix does not match certificate parameters")
    mu0_q, mu0_rad = cert.params.mu0_exact()
    weights = _mu_weights(cert, index)
    entries = [
        _lambda_entry(matrix, weights, mu0_q, mu0_rad, j) for j in range(len(index))
    ]
    return LambdaVector(index=index, entries=entries,
                        scale_num=matrix.scale_num, scale_rad=matrix.scale_rad)


# -- verification ----------------------------------------------------------


def objective(cert: DualCertificate) -> BoundValue:
    """Exact bound m^(-d)*(mu_0 + sum_x mu_x) in Q + Q*sqrt(r2)."""
    params = cert.params
    k = Fraction(1, params.m**params.d)
    mu0_q, mu0_rad = params.mu0_exact()
    return BoundValue({1: k * cert.mu_sum()}) + BoundValue.from_surd(k * mu0_q, mu0_rad)


_POOL_STATE: dict = {}


def _sign_worker_init(d, m, r2, mu_items, max_bits):
    params = Params(d=d, m=m, r2=r2)
    index = enumerate_reps(d, m)
    matrix = build_matrix(index, backend="exact")
    cert = DualCertificate(params=params, mu=dict(mu_items))
    weights = _mu_weights(cert, index)
    mu0_q, mu0_rad = params.mu0_exact()
    _POOL_STATE.update(matrix=matrix, weights=weights, mu0_q=mu0_q,
                       mu0_rad=mu0_rad, max_bits=max_bits)


def _sign_worker(j: int):
    st = _POOL_STATE
    entry = _lambda_entry(st["matrix"], st["weights"], st["mu0_q"], st["mu0_rad"], j)
    try:
        return j, entry.sign(st["max_bits"])
    except IndeterminateSignError:
        return j, None


def _column_signs(cert: DualCertificate, matrix: SymDFTMatrix,
                  max_bits: int) -> list[int | None]:
    n = len(matrix.index)
    threads = int(os.environ.get("DLPBOUND_THREADS", "1") or "1")
    if threads > 1 and n >= 64:
        import multiprocessing as mp

        p = cert.params
        init_args = (p.d, p.m, p.r2, tuple(cert.mu.items()), max_bits)
        out: list[int | None] = [None] * n
        with mp.Pool(threads, initializer=_sign_worker_init, initargs=init_args) as pool:
            for j, s in pool.imap_unordered(_sign_worker, range(n), chunksize=4):
                out[j] = s
        return out
    weights = _mu_weights(cert, matrix.index)
    mu0_q, mu0_rad = cert.params.mu0_exact()
    signs: list[int | None] = []
    for j in range(n):
        entry = _lambda_entry(matrix, weights, mu0_q, mu0_rad, j)
        try:
            signs.append(entry.sign(max_bits))
        except IndeterminateSignError:
            signs.append(None)
    return signs


def verify(cert: DualCertificate, matrix: SymDFTMatrix | None = None,
           digits: int = 8, max_bits: int | None = None) -> VerificationReport:
    """Exact feasibility check of a certificate; never trusts floats.

    Checks, in order: structural constraints (enforced at construction,
    re-asserted here), the claimed objective if the certificate carries
    one, and sign(Lambda_y) >= 0 for every representative y.  On success
    the report carries the exact objective, a floor-rounded decimal of
    it, and comparisons against recorded densities.
    """
    if max_bits is None:
        max_bits = int(os.environ.get("DLPBOUND_MAX_BITS", str(DEFAULT_MAX_BITS)))
    params = cert.params
    if matrix is None:
        matrix = build_matrix(enumerate_reps(params.d, params.m), backend="exact")
    if matrix.backend != "exact":
        raise ValueError("verification needs the exact matrix backend")
    index = matrix.index

    for rep, value in cert.mu.items():
        if value < 0 or norm_sq(rep) < params.r2:
            return VerificationReport(
                status="Infeasible", witness=rep,
                detail="stored mu entry violates structural constraints",
                objective=None, decimal_lower_bound="", comparisons=None)

    obj = objective(cert)
    decimal = bound_decimal(obj, digits, "floor", max_bits)
    comps = compare_known(params.d, obj)

    if cert.claimed_objective is not None and not (cert.claimed_objective == obj):
        return VerificationReport(
            status="Infeasible", witness=None,
            detail=(f"claimed objective {cert.claimed_objective.serialize()} "
                    f"differs from recomputed {obj.serialize()}"),
            objective=obj, decimal_lower_bound=decimal, comparisons=comps)

    signs = _column_signs(cert, matrix, max_bits)
    for j, s in enumerate(signs):
        if s is None:
            return VerificationReport(
                status="Indeterminate", witness=index.reps[j],
                detail="sign determination hit its precision cap",
                objective=obj, decimal_lower_bound=decimal, comparisons=comps)
        if s < 0:
            return VerificationReport(
                status="Infeasible", witness=index.reps[j],
                detail="lambda is negative at this representative",
                objective=obj, decimal_lower_bound=decimal, comparisons=comps)

    # independent recomputation of the bound through column 0 of the
    # transform; S_x0 = 1 for every x makes this m^(-d) * (mu_0 + sum mu)
    mu0_q, mu0_rad = params.mu0_exact()
    lam0 = _lambda_entry(matrix, _mu_weights(cert, index), mu0_q, mu0_rad, 0)
    via_matrix = lam0.as_bound_value()
    if via_matrix is None:
        raise ArithmeticError("Lambda_0 is not rational over the surd basis")
    if not (via_matrix.scale(Fraction(1, params.m**params.d)) == obj):
        raise ArithmeticError(
            "objective mismatch between direct sum and transform column 0")

    return VerificationReport(
        status="Verified", witness=None, detail="",
        objective=obj, decimal_lower_bound=decimal, comparisons=comps)


# -- known densities -------------------------------------------------------

# center densities of the best known packings, with the best proven
# upper bounds on the center density (decimals recorded rounded up, so
# exceeding the recorded value rigorously implies exceeding the truth);
# in dimension 3 the packing density is proven optimal, so it is its
# own upper bound
KNOWN_DENSITIES: dict[int, tuple[BoundValue, BoundValue]] = {
    3: (BoundValue({2: Fraction(1, 8)}), BoundValue({2: Fraction(1, 8)})),
    4: (BoundValue({1: Fraction(1, 8)}), BoundValue({1: Fraction(12891, 10**5)})),
    5: (BoundValue({2: Fraction(1, 16)}), BoundValue({1: Fraction(9740, 10**5)})),
    6: (BoundValue({3: Fraction(1, 24)}), BoundValue({1: Fraction(7939747, 10**8)})),
    7: (BoundValue({1: Fraction(1, 16)}), BoundValue({1: Fraction(6797101, 10**8)})),
    9: (BoundValue({2: Fraction(1, 32)}), BoundValue({1: Fraction(5794146, 10**8)})),
    10: (BoundValue({1: Fraction(5, 128)}), BoundValue({1: Fraction(5623564, 10**8)})),
    11: (BoundValue({1: Fraction(9, 256)}), BoundValue({1: Fraction(5664513, 10**8)})),
    12: (BoundValue({1: Fraction(1, 27)}), BoundValue({1: Fraction(5969745, 10**8)})),
    13: (BoundValue({1: Fraction(9, 256)}), BoundValue({1: Fraction(6609354, 10**8)})),
}


def compare_known(d: int, bound: BoundValue) -> ComparisonReport:
    """Exact comparison of a bound against the recorded density table."""
    known = KNOWN_DENSITIES.get(d)
    if known is None:
        return ComparisonReport(d=d, bound=bound, best_packing=None,
                                upper_bound=None, exceeds_packing=None,
                                exceeds_upper=None)
    packing, upper = known
    return ComparisonReport(
        d=d, bound=bound, best_packing=packing, upper_bound=upper,
        exceeds_packing=(bound - packing).sign() > 0,
        exceeds_upper=(bound - upper).sign() > 0,
    )


# -- certificate files -----------------------------------------------------


def write_certificate(cert: DualCertificate, path: str,
                      include_objective: bool = True) -> None:
    """Write the line-oriented DLPCERT 1 format; deterministic layout."""
    p = cert.params
    lines = ["DLPCERT 1", f"d {p.d}", f"m {p.m}", f"r2 {p.r2}", "scaling orbit"]
    for rep in sorted(cert.mu):
        v = cert.mu[rep]
        coords = " ".join(str(c) for c in rep)
        lines.append(f"mu {coords} {v.numerator}/{v.denominator}")
    if include_objective:
        lines.append(f"objective {objective(cert).serialize()}")
    lines.append("end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_certificate(path: str) -> DualCertificate:
    """Parse and validate a DLPCERT 1 file; malformed input is rejected."""
    with open(path, encoding="utf-8") as fh:
        raw = [line.rstrip("\n") for line in fh]
    lines = [line for line in raw if line.strip()]
    if not lines or lines[0].strip() != "DLPCERT 1":
        raise ValueError("not a DLPCERT 1 file")
    if lines[-1].strip() != "end":
        raise ValueError("missing end marker")
    header: dict[str, int] = {}
    body = lines[1:-1]
    pos = 0
    for key in ("d", "m", "r2"):
        if pos >= len(body):
            raise ValueError("truncated header")
        name, _, val = body[pos].partition(" ")
        if name != key:
            raise ValueError(f"expected {key} line, got {body[pos]!r}")
        header[key] = int(val)
        pos += 1
    if pos >= len(body) or body[pos].strip() != "scaling orbit":
        raise ValueError("missing 'scaling orbit' line")
    pos += 1
    params = Params(d=header["d"], m=header["m"], r2=header["r2"])

    mu: dict[tuple[int, ...], Fraction] = {}
    claimed: BoundValue | None = None
    prev: tuple[int, ...] | None = None
    for line in body[pos:]:
        fields = line.split()
        if fields[0] == "mu":
            if len(fields) != params.d + 2:
                raise ValueError(f"malformed mu line: {line!r}")
            rep = tuple(int(t) for t in fields[1:-1])
            if prev is not None and rep <= prev:
                raise ValueError("mu lines out of order or duplicated")
            prev = rep
            p_str, slash, q_str = fields[-1].partition("/")
            if not slash:
                raise ValueError(f"mu value must be written p/q: {line!r}")
            value = Fraction(int(p_str), int(q_str))
            if value < 0:
                raise ValueError(f"negative mu value at {rep}")
            mu[rep] = value
        elif fields[0] == "objective":
            if claimed is not None:
                raise ValueError("duplicate objective line")
            claimed = parse_bound_expr(line.partition(" ")[2])
        else:
            raise ValueError(f"unrecognized line: {line!r}")
    return DualCertificate(params=params, mu=mu, provenance="file",
                           claimed_objective=claimed)
