"""Dual and primal LP construction and the simplex solver."""

from __future__ import annotations

from fractions import Fraction

import pytest

from dlpbound.lp import (
    LPConstraint,
    LPInstance,
    LPVariable,
    build_dual_lp,
    build_primal_lp,
    simplex_solve,
)
from dlpbound.orbits import Params, enumerate_reps
from dlpbound.symdft import build_matrix


def _dual(d, m, r2, backend="float64", eps=1e-10):
    params = Params(d, m, r2)
    index = enumerate_reps(d, m)
    matrix = build_matrix(index, backend=backend)
    return params, index, build_dual_lp(params, index, matrix, eps=eps)


def _primal(d, m, r2, backend="float64"):
    params = Params(d, m, r2)
    index = enumerate_reps(d, m)
    matrix = build_matrix(index, backend=backend)
    return params, index, build_primal_lp(params, index, matrix)


def test_hand_example_instance_structure():
    # d=1, m=4, r2=4: only x=(2,) is free; mu_0 = 1 moves into the rhs,
    # so row y reads  F[(2,)][y] * mu >= eps - F[0][y]
    eps = 1e-10
    _, _, lp = _dual(1, 4, 4, eps=eps)
    assert lp.sense == "max"
    assert lp.n_vars == 1
    assert lp.variables[0].rep == (2,)
    assert lp.variables[0].lb == 0.0 and lp.variables[0].ub is None
    assert lp.objective == pytest.approx([0.25])
    assert lp.objective_const == pytest.approx(0.25)
    coeffs = [c.coeffs[0] for c in lp.constraints]
    rhs = [c.rhs for c in lp.constraints]
    assert coeffs == pytest.approx([0.5, -1.0, 0.5])
    assert rhs == pytest.approx([eps - 0.5, eps - 1.0, eps - 0.5])
    assert all(c.sense == ">=" for c in lp.constraints)


def test_hand_example_float_optimum():
    # binding row is y=(1,): mu <= 1 - eps, so the value is (2 - eps)/4
    eps = 1e-10
    _, _, lp = _dual(1, 4, 4, eps=eps)
    sol = simplex_solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx((2 - eps) / 4, abs=1e-14)
    assert sol.values[(2,)] == pytest.approx(1 - eps, abs=1e-14)
    assert sol.meta["kind"] == "dual"


def test_hand_example_exact_optimum():
    _, _, lp = _dual(1, 4, 4, backend="exact", eps=Fraction(0))
    sol = simplex_solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == Fraction(1, 2)
    assert sol.values[(2,)] == Fraction(1)
    assert sol.domain == "exact"


def test_structural_zeros_are_not_variables():
    # representatives with 0 < |x|^2 < r2 are excluded from the dual
    params, index, lp = _dual(2, 6, 4)
    reps = {v.rep for v in lp.variables}
    for j, rep in enumerate(index.reps):
        n2 = index.norm_sqs[j]
        if n2 == 0 or 0 < n2 < params.r2:
            assert rep not in reps
        else:
            assert rep in reps


def test_eps_monotonicity():
    # tightening the inequality can only lower the optimum,
    # and a tiny eps moves it only a tiny amount
    _, _, lp0 = _dual(2, 6, 4, eps=0.0)
    _, _, lp1 = _dual(2, 6, 4, eps=1e-10)
    s0 = simplex_solve(lp0)
    s1 = simplex_solve(lp1)
    assert s0.status == s1.status == "optimal"
    assert s1.objective <= s0.objective + 1e-12
    assert s0.objective - s1.objective <= 1e-6


FLOAT_DUALITY_CASES = [(2, 6, 4), (3, 6, 4), (2, 10, 8), (4, 6, 9), (3, 10, 9)]


def test_float_weak_and_strong_duality():
    for d, m, r2 in FLOAT_DUALITY_CASES:
        _, index, dlp = _dual(d, m, r2, eps=0.0)
        assert len(index) <= 100
        _, _, plp = _primal(d, m, r2)
        ds = simplex_solve(dlp)
        ps = simplex_solve(plp)
        assert ds.status == "optimal" and ps.status == "optimal", (d, m, r2)
        # dual feasible values never exceed the primal optimum
        assert ds.objective <= ps.objective + 1e-9, (d, m, r2)
        assert abs(ds.objective - ps.objective) <= 1e-7, (d, m, r2)


EXACT_DUALITY_CASES = [(1, 4, 4), (2, 4, 2), (2, 6, 4), (3, 4, 4)]


def test_exact_strong_duality():
    for d, m, r2 in EXACT_DUALITY_CASES:
        _, _, dlp = _dual(d, m, r2, backend="exact", eps=Fraction(0))
        _, _, plp = _primal(d, m, r2, backend="exact")
        ds = simplex_solve(dlp)
        ps = simplex_solve(plp)
        assert ds.status == "optimal" and ps.status == "optimal"
        assert isinstance(ds.objective, Fraction)
        assert ds.objective == ps.objective, (d, m, r2)


def test_exact_matches_float_route():
    for d, m, r2 in EXACT_DUALITY_CASES:
        _, _, dlp = _dual(d, m, r2, backend="exact", eps=Fraction(0))
        exact = simplex_solve(dlp).objective
        _, _, flp = _dual(d, m, r2, eps=0.0)
        approx = simplex_solve(flp).objective
        assert abs(float(exact) - approx) <= 1e-9


def test_solver_is_deterministic():
    _, _, lp = _dual(3, 6, 4)
    a = simplex_solve(lp)
    b = simplex_solve(lp)
    assert a.objective == b.objective
    assert a.values == b.values
    assert a.iterations == b.iterations


def _tiny_lp(sense, constraints, objective, domain="float64"):
    variables = [LPVariable(name=f"x{i}", lb=0.0, ub=None) for i in range(len(objective))]
    return LPInstance(
        sense=sense,
        variables=variables,
        constraints=constraints,
        objective=list(objective),
        objective_const=0.0,
        domain=domain,
        meta={},
    )


def test_status_unbounded():
    lp = _tiny_lp("max", [LPConstraint(coeffs=[1.0, -1.0], sense=">=", rhs=0.0)], [1.0, 0.0])
    assert simplex_solve(lp).status == "unbounded"


def test_status_infeasible():
    lp = _tiny_lp(
        "max",
        [
            LPConstraint(coeffs=[1.0], sense="<=", rhs=-1.0),
        ],
        [1.0],
    )
    assert simplex_solve(lp).status == "infeasible"


def test_status_iteration_limit():
    _, _, lp = _dual(3, 6, 4)
    sol = simplex_solve(lp, max_iters=1)
    assert sol.status == "iteration_limit"
    assert sol.objective is None


def test_solution_reports_feasibility_violation():
    _, _, lp = _dual(2, 6, 4)
    sol = simplex_solve(lp)
    assert sol.status == "optimal"
    assert sol.max_violation is not None
    assert sol.max_violation <= 1e-9


def test_equality_constraints_respected():
    lp = _tiny_lp(
        "max",
        [
            LPConstraint(coeffs=[1.0, 1.0], sense="==", rhs=2.0),
            LPConstraint(coeffs=[1.0, -1.0], sense="<=", rhs=0.5),
        ],
        [1.0, 0.0],
    )
    sol = simplex_solve(lp)
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(1.25)


def test_primal_instance_shape():
    params, index, lp = _primal(2, 6, 4)
    assert lp.sense == "min"
    assert lp.meta["kind"] == "primal"
    assert lp.n_vars == len(index)
    far = [j for j, n2 in enumerate(index.norm_sqs) if n2 >= params.r2]
    for j in far:
        assert lp.variables[j].ub == 0.0
