"""Radialized linear programs over orbit representatives, and a dense
two-phase simplex solver for them.

Dual problem (variables mu_x >= 0 on representatives with normSq >= r2,
mu_0 fixed to (r/2)^d):

    maximize   m^(-d) * (mu_0 + sum_x mu_x)
    subject to (F^T mu)_y >= eps   for every representative y,

where the objective form uses the column identity F[x][0] = m^(-d/2),
which makes m^(-d/2) * lambda_0 = m^(-d) * sum mu.  Representatives
with 0 < normSq < r2 are excluded (their mu is structurally zero).

Primal problem (variables f_y on all representatives, f_x <= 0 for
normSq >= r2, f free elsewhere):

    minimize   (r/2)^d * f_0
    subject to (F f)_0 >= m^(-d/2),   (F f)_y >= 0 for y != 0.

Both are built either on float64 matrix entries or, when every needed
entry is rational (cosine moduli m in {1, 2, 3, 4, 6}) and the fixed
data is rational, on exact Fractions.  Exact rows are descaled by
m^(d/2) so no irrational scale enters the coefficients.

The solver is a dense tableau simplex: Dantzig pricing with
lowest-index tie-breaking, switching to Bland's rule after a run of
degenerate pivots, artificial variables only where the slack basis is
infeasible.  The float backend additionally relaxes inequality rows by
a tiny fixed low-discrepancy stagger (these instances are massively
degenerate; without it the ratio test stalls), repairs the relaxation
with a short dual-simplex pass on the true data, refactorizes the
tableau periodically, and re-solves the optimal basis from original
data with one iterative-refinement step in extended precision so
reported solutions do not carry accumulated pivot drift.  Nothing is
randomized: identical inputs take identical pivot paths, so solutions
are reproducible bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .orbits import OrbitIndex, Params
from .symdft import SymDFTMatrix

__all__ = [
    "LPVariable",
    "LPConstraint",
    "LPInstance",
    "LPSolution",
    "build_dual_lp",
    "build_primal_lp",
    "simplex_solve",
]

_RC_TOL = 1e-9
_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-9
_DEGENERATE_STREAK = 30


@dataclass
class LPVariable:
    name: str
    lb: object  # None for -inf, else numeric in the LP's domain
    ub: object  # None for +inf
    rep: tuple | None = None


@dataclass
class LPConstraint:
    coeffs: list
    sense: str  # '>=', '<=', '=='
    rhs: object
    label: str = ""


@dataclass
class LPInstance:
    sense: str  # 'max' or 'min'
    variables: list[LPVariable]
    constraints: list[LPConstraint]
    objective: list
    objective_const: object
    domain: str  # 'float64' or 'exact'
    meta: dict = field(default_factory=dict)

    @property
    def n_vars(self) -> int:
        return len(self.variables)


@dataclass
class LPSolution:
    status: str  # 'optimal', 'infeasible', 'unbounded', 'iteration_limit'
    objective: object
    values: dict
    iterations: int
    max_violation: object
    domain: str
    meta: dict = field(default_factory=dict)

    @property
    def by_rep(self) -> dict:
        return self.values


def _require_rational(entry, what: str) -> Fraction:
    q = entry.as_rational()
    if q is None:
        raise ValueError(
            f"{what} is irrational; exact LP construction needs a rational "
            f"cosine modulus (m in {{1, 2, 3, 4, 6}})"
        )
    return q


def build_dual_lp(params: Params, index: OrbitIndex, matrix: SymDFTMatrix,
                  eps=1e-10) -> LPInstance:
    """The dual bound program over the given representatives."""
    if (index.d, index.m) != (params.d, params.m):
        raise ValueError("orbit index does not match parameters")
    n = len(index)
    exact = matrix.backend == "exact"
    var_ids = [i for i in range(n) if index.norm_sqs[i] >= params.r2]
    if exact:
        if not params.mu0_is_rational:
            raise ValueError("exact dual LP needs rational (r/2)^d: even d or square r2")
        mu0, _ = params.mu0_exact()
        eps = Fraction(eps)
        if eps:
            if params.d % 2:
                raise ValueError("exact dual LP with eps != 0 needs even d")
            eps_descaled = eps * params.m ** (params.d // 2)
        else:
            eps_descaled = Fraction(0)
        S = matrix.to_unscaled_matrix()
        ent = lambda i, j: _require_rational(S[i][j], f"S[{i}][{j}]")
        zero = Fraction(0)
        obj_coeff = Fraction(1, params.m**params.d)
    else:
        mu0 = params.mu0_float()
        eps = float(eps)
        eps_descaled = None
        ent = matrix.entry
        zero = 0.0
        obj_coeff = float(params.m) ** (-params.d)

    variables = [
        LPVariable(name=f"mu{index.reps[i]}", lb=zero, ub=None, rep=index.reps[i])
        for i in var_ids
    ]
    constraints = []
    for j in range(n):
        if exact:
            coeffs = [ent(i, j) for i in var_ids]
            rhs = eps_descaled - ent(0, j) * mu0
        else:
            coeffs = [ent(i, j) for i in var_ids]
            rhs = eps - ent(0, j) * mu0
        constraints.append(
            LPConstraint(coeffs=coeffs, sense=">=", rhs=rhs, label=f"lam{index.reps[j]}")
        )
    objective = [obj_coeff for _ in var_ids]
    return LPInstance(
        sense="max",
        variables=variables,
        constraints=constraints,
        objective=objective,
        objective_const=obj_coeff * mu0,
        domain="exact" if exact else "float64",
        meta={"kind": "dual", "params": params, "eps": eps, "var_ids": var_ids},
    )


def build_primal_lp(params: Params, index: OrbitIndex, matrix: SymDFTMatrix) -> LPInstance:
    """The primal (auxiliary-function) program over the representatives."""
    if (index.d, index.m) != (params.d, params.m):
        raise ValueError("orbit index does not match parameters")
    n = len(index)
    exact = matrix.backend == "exact"
    if exact:
        if not params.mu0_is_rational:
            raise ValueError("exact primal LP needs rational (r/2)^d")
        mu0, _ = params.mu0_exact()
        S = matrix.to_unscaled_matrix()
        ent = lambda i, j: _require_rational(S[i][j], f"S[{i}][{j}]")
        zero = Fraction(0)
        rhs0 = Fraction(1)  # descaled: (S f)_0 >= 1
    else:
        mu0 = params.mu0_float()
        ent = matrix.entry
        zero = 0.0
        rhs0 = float(params.m) ** (-params.d / 2.0)

    variables = []
    for i in range(n):
        if index.norm_sqs[i] >= params.r2:
            variables.append(LPVariable(name=f"f{index.reps[i]}", lb=None, ub=zero, rep=index.reps[i]))
        else:
            variables.append(LPVariable(name=f"f{index.reps[i]}", lb=None, ub=None, rep=index.reps[i]))
    constraints = []
    for x in range(n):
        coeffs = [ent(x, j) for j in range(n)]
        rhs = rhs0 if x == 0 else zero
        constraints.append(
            LPConstraint(coeffs=coeffs, sense=">=", rhs=rhs, label=f"Ff{index.reps[x]}")
        )
    objective = [zero] * n
    objective[0] = mu0
    return LPInstance(
        sense="min",
        variables=variables,
        constraints=constraints,
        objective=objective,
        objective_const=zero,
        domain="exact" if exact else "float64",
        meta={"kind": "primal", "params": params},
    )


# -- standard form ------------------------------------------------------


class _StandardForm:
    """min c.x, A x = b, x >= 0, with bookkeeping to map back."""

    def __init__(self, lp: LPInstance):
        self.lp = lp
        exact = lp.domain == "exact"
        zero = Fraction(0) if exact else 0.0
        one = Fraction(1) if exact else 1.0
        flip = lp.sense == "max"

        # variable transforms: list of (kind, data); kinds:
        #   'plain' x>=0; 'neg' x<=0 -> -x; 'split' free -> x+ - x-
        self.transforms = []
        cols = []  # per standard column: (orig var index, sign)
        for vi, var in enumerate(lp.variables):
            lb, ub = var.lb, var.ub
            if lb is not None and lb == zero and ub is None:
                self.transforms.append(("plain", len(cols)))
                cols.append((vi, one))
            elif ub is not None and ub == zero and lb is None:
                self.transforms.append(("neg", len(cols)))
                cols.append((vi, -one))
            elif lb is None and ub is None:
                self.transforms.append(("split", len(cols)))
                cols.append((vi, one))
                cols.append((vi, -one))
            else:
                raise ValueError(f"unsupported bounds on {var.name}: [{lb}, {ub}]")
        self.cols = cols
        ncols = len(cols)

        rows, rhs, senses = [], [], []
        for con in lp.constraints:
            row = [zero] * ncols
            for k, (vi, sgn) in enumerate(cols):
                row[k] = con.coeffs[vi] * sgn
            b = con.rhs
            sense = con.sense
            # orient: '<=' with b >= 0 or '>=' with b <= 0 becomes '<=' b>=0
            if sense == ">=":
                row = [-a for a in row]
                b = -b
                sense = "<="
            if sense == "<=" and b < zero:
                row = [-a for a in row]
                b = -b
                sense = ">="
            elif sense == "==" and b < zero:
                row = [-a for a in row]
                b = -b
            rows.append(row)
            rhs.append(b)
            senses.append(sense)

        c = [zero] * ncols
        for k, (vi, sgn) in enumerate(cols):
            coeff = lp.objective[vi] * sgn
            c[k] = -coeff if flip else coeff
        self.A, self.b, self.senses, self.c = rows, rhs, senses, c
        self.flip = flip
        self.zero, self.one = zero, one

    def recover(self, xstd) -> list:
        """Original variable values from a standard-form vector."""
        zero = self.zero
        out = [zero] * len(self.lp.variables)
        for k, (vi, sgn) in enumerate(self.cols):
            out[vi] = out[vi] + sgn * xstd[k]
        return out


def _max_violation(lp: LPInstance, values) -> float:
    worst = 0.0
    for con in lp.constraints:
        lhs = sum(float(c) * float(v) for c, v in zip(con.coeffs, values) if c)
        b = float(con.rhs)
        if con.sense == ">=":
            worst = max(worst, b - lhs)
        elif con.sense == "<=":
            worst = max(worst, lhs - b)
        else:
            worst = max(worst, abs(lhs - b))
    return worst


def simplex_solve(lp: LPInstance, max_iters: int | None = None) -> LPSolution:
    """Solve an LPInstance; the arithmetic domain follows the instance."""
    sf = _StandardForm(lp)
    nrows, ncols = len(sf.A), len(sf.c)
    if max_iters is None:
        max_iters = 50 * (nrows + ncols)
    if lp.domain == "exact":
        status, x, iters = _simplex_exact(sf, max_iters)
    else:
        status, x, iters = _simplex_float(sf, max_iters)
    if status != "optimal":
        return LPSolution(status=status, objective=None, values={}, iterations=iters,
                          max_violation=None, domain=lp.domain, meta=dict(lp.meta))
    orig = sf.recover(x)
    obj = lp.objective_const
    for coeff, v in zip(lp.objective, orig):
        obj = obj + coeff * v
    values = {}
    for var, v in zip(lp.variables, orig):
        key = var.rep if var.rep is not None else var.name
        values[key] = v
    viol = _max_violation(lp, orig)
    return LPSolution(status=status, objective=obj, values=values, iterations=iters,
                      max_violation=viol, domain=lp.domain, meta=dict(lp.meta))


# -- float backend -------------------------------------------------------


_REFACTOR_EVERY = 1500


def _simplex_float(sf: _StandardForm, max_iters: int):
    nrows = len(sf.A)
    ncols = len(sf.c)
    A = np.array([[float(v) for v in row] for row in sf.A], dtype=np.float64)
    b = np.array([float(v) for v in sf.b], dtype=np.float64)
    c = np.array([float(v) for v in sf.c], dtype=np.float64)

    # anti-degeneracy: relax each inequality row by a tiny fixed amount,
    # staggered by a low-discrepancy sequence so ratio-test ties are broken
    # generically; the final basis is re-solved against the unperturbed rhs
    # afterwards.  No randomness: identical inputs take identical paths.
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    b_solve = b.copy()
    for i, sense in enumerate(sf.senses):
        if sense == "<=":
            stagger = 1.0 + ((i + 1) * golden) % 1.0
            b_solve[i] += (1e-9 + 1e-9 * abs(b_solve[i])) * stagger

    # slack/surplus/artificial assembly
    slack_count = 0
    ext = []
    basis = [-1] * nrows
    for i, sense in enumerate(sf.senses):
        if sense == "<=":
            col = np.zeros(nrows)
            col[i] = 1.0
            ext.append(col)
            basis[i] = ncols + len(ext) - 1
            slack_count += 1
        elif sense == ">=":
            col = np.zeros(nrows)
            col[i] = -1.0
            ext.append(col)
            slack_count += 1
    art_cols = []
    for i in range(nrows):
        if basis[i] < 0:
            col = np.zeros(nrows)
            col[i] = 1.0
            ext.append(col)
            basis[i] = ncols + len(ext) - 1
            art_cols.append(ncols + len(ext) - 1)
    full = np.hstack([A] + [col.reshape(-1, 1) for col in ext]) if ext else A
    T = np.hstack([full, b_solve.reshape(-1, 1)]).copy()
    total = full.shape[1]
    art_set = set(art_cols)

    iters = 0
    if art_cols:
        cost1 = np.zeros(total)
        for j in art_cols:
            cost1[j] = 1.0
        status, iters = _pivot_loop(T, basis, cost1, max_iters, iters, None, full, b_solve)
        if status != "optimal":
            return status, None, iters
        feas = sum(T[i, -1] for i in range(nrows) if basis[i] in art_set)
        if feas > _FEAS_TOL:
            return "infeasible", None, iters
        _drive_out_artificials(T, basis, art_set, ncols + slack_count)
    cost2 = np.zeros(total)
    cost2[:ncols] = c
    status, iters = _pivot_loop(T, basis, cost2, max_iters, iters, art_set, full, b_solve)
    if status != "optimal":
        return status, None, iters

    # swap the true rhs back in; the basis stays dual feasible, and a short
    # dual-simplex pass repairs any tiny primal infeasibility the
    # perturbation left behind
    Tn = _refactor_tableau(full, b, basis)
    if Tn is not None:
        T = Tn
        iters = _dual_cleanup(T, basis, cost2, art_set, full, b, iters, max_iters)

    x = np.zeros(total)
    for i, bcol in enumerate(basis):
        x[bcol] = T[i, -1]
    x = _refine_basic_solution(full, b, basis, x)
    return "optimal", [float(v) for v in x[:ncols]], iters


def _dual_cleanup(T, basis, cost, art_set, full, b, iters, max_iters):
    nrows = T.shape[0]
    z = cost.copy()
    for i in range(nrows):
        cb = cost[basis[i]]
        if cb:
            z -= cb * T[i, :-1]
    steps = 0
    while steps < 2000 and iters < max_iters:
        leave = int(np.argmin(T[:, -1]))
        if T[leave, -1] >= -1e-11:
            break
        row = T[leave, :-1]
        cand = np.where(row < -_PIVOT_TOL)[0]
        if art_set:
            cand = np.array([j for j in cand if j not in art_set], dtype=int)
        if len(cand) == 0:
            break
        ratios = np.maximum(z[cand], 0.0) / (-row[cand])
        e = int(cand[int(np.argmin(ratios))])
        piv = T[leave, e]
        T[leave, :] /= piv
        colv = T[:, e].copy()
        colv[leave] = 0.0
        T -= np.outer(colv, T[leave, :])
        T[:, e] = 0.0
        T[leave, e] = 1.0
        z = z - z[e] * T[leave, :-1]
        basis[leave] = e
        iters += 1
        steps += 1
    return iters


def _refactor_tableau(full, b, basis):
    """Rebuild the tableau T = [B^-1 full | B^-1 b] from original data."""
    B = full[:, basis]
    try:
        rhs = np.hstack([full, b.reshape(-1, 1)])
        T = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError:
        return None
    return T


def _pivot_loop(T, basis, cost, max_iters, iters, art_set, full, b):
    nrows = T.shape[0]

    def reduced_costs():
        z = cost.copy()
        for i in range(nrows):
            cb = cost[basis[i]]
            if cb:
                z -= cb * T[i, :-1]
        return z

    z = reduced_costs()
    obj = sum(cost[basis[i]] * T[i, -1] for i in range(nrows))
    bland = False
    streak = 0
    since_refactor = 0
    refactored_here = False
    while True:
        if iters >= max_iters:
            return "iteration_limit", iters
        if since_refactor >= _REFACTOR_EVERY:
            Tn = _refactor_tableau(full, b, basis)
            if Tn is not None:
                T[:, :] = Tn
                z = reduced_costs()
            since_refactor = 0
        cand = np.where(z < -_RC_TOL)[0]
        if art_set:
            cand = cand[[j not in art_set for j in cand]] if len(cand) else cand
        if len(cand) == 0:
            return "optimal", iters
        e = int(cand[0]) if bland else int(cand[int(np.argmin(z[cand]))])
        col = T[:, e]
        mask = col > _PIVOT_TOL
        if not mask.any():
            return "unbounded", iters
        ratios = np.full(nrows, np.inf)
        ratios[mask] = T[mask, -1] / col[mask]
        best = ratios.min()
        if not np.isfinite(best) or np.isnan(T[:, -1]).any():
            # numerical breakdown: rebuild from original data once, fail if
            # it does not restore a usable tableau
            if refactored_here:
                return "numerical_error", iters
            Tn = _refactor_tableau(full, b, basis)
            if Tn is None:
                return "numerical_error", iters
            T[:, :] = Tn
            z = reduced_costs()
            since_refactor = 0
            refactored_here = True
            continue
        refactored_here = False
        tied = np.where(ratios <= best + 1e-12 * abs(best) + 1e-15)[0]
        leave = min(tied, key=lambda i: basis[i])
        piv = T[leave, e]
        T[leave, :] /= piv
        colv = T[:, e].copy()
        colv[leave] = 0.0
        T -= np.outer(colv, T[leave, :])
        T[:, e] = 0.0
        T[leave, e] = 1.0
        z = z - z[e] * T[leave, :-1]
        basis[leave] = e
        iters += 1
        since_refactor += 1
        new_obj = sum(cost[basis[i]] * T[i, -1] for i in range(nrows))
        if abs(new_obj - obj) <= 1e-13 * (1 + abs(obj)):
            streak += 1
            if streak >= _DEGENERATE_STREAK:
                bland = True
        else:
            streak = 0
            bland = False
        obj = new_obj


def _drive_out_artificials(T, basis, art_set, true_cols):
    nrows = T.shape[0]
    for i in range(nrows):
        if basis[i] in art_set:
            row = T[i, :true_cols]
            js = np.where(np.abs(row) > _PIVOT_TOL)[0]
            if len(js) == 0:
                continue  # redundant row; leave the zero-valued artificial basic
            e = int(js[0])
            piv = T[i, e]
            T[i, :] /= piv
            colv = T[:, e].copy()
            colv[i] = 0.0
            T -= np.outer(colv, T[i, :])
            T[:, e] = 0.0
            T[i, e] = 1.0
            basis[i] = e


def _refine_basic_solution(full, b, basis, x):
    """Re-solve the optimal basis system from original data, with one
    iterative-refinement step, to strip accumulated pivot error."""
    B = full[:, basis]
    try:
        xb = np.linalg.solve(B, b)
        r = (b.astype(np.longdouble) - B.astype(np.longdouble) @ xb.astype(np.longdouble))
        xb = xb + np.linalg.solve(B, r.astype(np.float64))
    except np.linalg.LinAlgError:
        return x
    out = np.zeros(len(x))
    for i, j in enumerate(basis):
        out[j] = xb[i]
    return out


# -- exact backend --------------------------------------------------------


def _simplex_exact(sf: _StandardForm, max_iters: int):
    Z = Fraction(0)
    one = Fraction(1)
    nrows = len(sf.A)
    ncols = len(sf.c)
    rows = [list(map(Fraction, r)) for r in sf.A]
    b = list(map(Fraction, sf.b))
    c = list(map(Fraction, sf.c))

    ext_count = 0
    basis = [-1] * nrows
    slack_idx = {}
    art_cols = []
    ext_cols = []  # (row, value)
    for i, sense in enumerate(sf.senses):
        if sense == "<=":
            ext_cols.append((i, one))
            basis[i] = ncols + ext_count
            ext_count += 1
        elif sense == ">=":
            ext_cols.append((i, -one))
            ext_count += 1
    for i in range(nrows):
        if basis[i] < 0:
            ext_cols.append((i, one))
            basis[i] = ncols + ext_count
            art_cols.append(ncols + ext_count)
            ext_count += 1
    total = ncols + ext_count
    T = []
    for i in range(nrows):
        row = rows[i] + [Z] * ext_count + [b[i]]
        T.append(row)
    for k, (i, v) in enumerate(ext_cols):
        T[i][ncols + k] = v
    art_set = set(art_cols)

    iters = 0
    if art_cols:
        cost1 = [Z] * total
        for j in art_cols:
            cost1[j] = one
        status, iters = _pivot_loop_exact(T, basis, cost1, max_iters, iters, None)
        if status == "iteration_limit":
            return status, None, iters
        feas = sum((T[i][-1] for i in range(nrows) if basis[i] in art_set), Z)
        if feas > 0:
            return "infeasible", None, iters
        _drive_out_artificials_exact(T, basis, art_set, ncols + len(ext_cols) - len(art_cols))
    cost2 = [Z] * total
    for j in range(ncols):
        cost2[j] = c[j]
    status, iters = _pivot_loop_exact(T, basis, cost2, max_iters, iters, art_set)
    if status != "optimal":
        return status, None, iters
    x = [Z] * total
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return "optimal", x[:ncols], iters


def _pivot_loop_exact(T, basis, cost, max_iters, iters, art_set):
    Z = Fraction(0)
    nrows = len(T)
    total = len(T[0]) - 1
    z = list(cost)
    for i in range(nrows):
        cb = cost[basis[i]]
        if cb:
            row = T[i]
            for j in range(total):
                if row[j]:
                    z[j] -= cb * row[j]
    obj = sum((cost[basis[i]] * T[i][-1] for i in range(nrows)), Z)
    bland = False
    streak = 0
    while True:
        if iters >= max_iters:
            return "iteration_limit", iters
        e = -1
        if bland:
            for j in range(total):
                if z[j] < 0 and (not art_set or j not in art_set):
                    e = j
                    break
        else:
            best = Z
            for j in range(total):
                if z[j] < best and (not art_set or j not in art_set):
                    best = z[j]
                    e = j
        if e < 0:
            return "optimal", iters
        leave, best_ratio = -1, None
        for i in range(nrows):
            a = T[i][e]
            if a > 0:
                ratio = T[i][-1] / a
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leave]
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return "unbounded", iters
        piv = T[leave][e]
        prow = T[leave]
        if piv != 1:
            inv = 1 / piv
            T[leave] = prow = [v * inv for v in prow]
        for i in range(nrows):
            if i != leave:
                f = T[i][e]
                if f:
                    row = T[i]
                    T[i] = [rv - f * pv for rv, pv in zip(row, prow)]
        ze = z[e]
        if ze:
            z = [zv - ze * pv for zv, pv in zip(z, prow[:-1])]
        basis[leave] = e
        iters += 1
        new_obj = sum((cost[basis[i]] * T[i][-1] for i in range(nrows)), Z)
        if new_obj == obj:
            streak += 1
            if streak >= _DEGENERATE_STREAK:
                bland = True
        else:
            streak = 0
            bland = False
        obj = new_obj


def _drive_out_artificials_exact(T, basis, art_set, true_cols):
    nrows = len(T)
    for i in range(nrows):
        if basis[i] in art_set:
            e = -1
            for j in range(true_cols):
                if T[i][j]:
                    e = j
                    break
            if e < 0:
                continue
            piv = T[i][e]
            if piv != 1:
                inv = 1 / piv
                T[i] = [v * inv for v in T[i]]
            prow = T[i]
            for k in range(nrows):
                if k != i and T[k][e]:
                    f = T[k][e]
                    T[k] = [rv - f * pv for rv, pv in zip(T[k], prow)]
            basis[i] = e
