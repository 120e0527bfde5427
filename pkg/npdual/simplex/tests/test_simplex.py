"""Tests for the dense simplex solver."""
import io

import numpy as np
import pytest

from npdual.simplex import LinearProgram, LpStatus, RowSense, solve_lp
from npdual.simplex import simplex as simplex_module
from npdual.simplex.exceptions import InvalidLinearProgram, NumericalBreakdown

LE, GE, EQ = RowSense.LE, RowSense.GE, RowSense.EQ


def _assert_certified(solution):
    assert solution.status is LpStatus.OPTIMAL
    assert solution.residuals.primal <= 1e-8
    assert solution.residuals.dual <= 1e-8
    assert solution.residuals.slackness <= 1e-8
    assert solution.residuals.objective_gap <= 1e-8
    assert solution.certified()


def test_single_variable():
    """maximize x s.t. x <= 1 gives x = 1 with multiplier 1 on the row."""
    solution = solve_lp(LinearProgram(objective=[1.0], matrix=[[1.0]], senses=(LE,), rhs=[1.0]))
    _assert_certified(solution)
    assert solution.primal[0] == pytest.approx(1.0)
    assert solution.duals[0] == pytest.approx(1.0)
    assert solution.objective == pytest.approx(1.0)

def test_degenerate_face():
    """maximize x + y s.t. x + y <= 1: any reported vertex sits on the face."""
    solution = solve_lp(LinearProgram(objective=[1.0, 1.0], matrix=[[1.0, 1.0]], senses=(LE,), rhs=[1.0]))
    _assert_certified(solution)
    assert solution.objective == pytest.approx(1.0)
    assert solution.primal.sum() == pytest.approx(1.0)

def test_fixed_variable_free_objective():
    """maximize t s.t. t <= 0.3 a with a fixed at 2 and t free gives 0.6."""
    lp = LinearProgram(objective=[1.0, 0.0], matrix=[[1.0, -0.3]], senses=(LE,), rhs=[0.0],
                       lower=[-np.inf, 2.0], upper=[np.inf, 2.0])
    solution = solve_lp(lp)
    _assert_certified(solution)
    assert solution.primal[0] == pytest.approx(0.6)
    assert solution.primal[1] == 2.0
    assert solution.reduced_costs[1] == pytest.approx(0.3)

def test_minimize_with_ge_and_eq_rows():
    """A two-phase problem: min x + 2y s.t. x + y >= 2, x - y = 0."""
    lp = LinearProgram(objective=[1.0, 2.0], matrix=[[1.0, 1.0], [1.0, -1.0]], senses=(GE, EQ), rhs=[2.0, 0.0],
                       maximize=False)
    solution = solve_lp(lp)
    _assert_certified(solution)
    np.testing.assert_allclose(solution.primal, [1.0, 1.0], atol=1e-12)
    assert solution.objective == pytest.approx(3.0)
    # Raising the requirement by one costs 1.5
    assert solution.duals[0] == pytest.approx(1.5)

def test_negative_rhs_row_flip():
    """Rows with negative right-hand sides are handled and multipliers keep the user's sign."""
    lp = LinearProgram(objective=[-1.0], matrix=[[-1.0]], senses=(LE,), rhs=[-3.0])
    solution = solve_lp(lp)
    _assert_certified(solution)
    assert solution.primal[0] == pytest.approx(3.0)
    assert solution.duals[0] == pytest.approx(1.0)

def test_upper_bounds_as_rows():
    """Finite upper bounds are honored and priced through the reduced costs."""
    lp = LinearProgram(objective=[2.0, 1.0], matrix=[[1.0, 1.0]], senses=(LE,), rhs=[3.0], upper=[1.0, 5.0])
    solution = solve_lp(lp)
    _assert_certified(solution)
    np.testing.assert_allclose(solution.primal, [1.0, 2.0], atol=1e-12)
    assert solution.reduced_costs[0] == pytest.approx(1.0)

def test_negative_lower_bound_only_upper():
    """A variable bounded only above is reflected and solved."""
    lp = LinearProgram(objective=[-1.0], matrix=np.zeros((0, 1)), senses=(), rhs=[],
                       lower=[-np.inf], upper=[4.0], maximize=False)
    solution = solve_lp(lp)
    _assert_certified(solution)
    assert solution.primal[0] == pytest.approx(4.0)

def test_infeasible_with_witness():
    """x <= 1 and x >= 2 is infeasible and the witness combines both rows."""
    lp = LinearProgram(objective=[1.0], matrix=[[1.0], [1.0]], senses=(LE, GE), rhs=[1.0, 2.0])
    solution = solve_lp(lp)
    assert solution.status is LpStatus.INFEASIBLE
    farkas = solution.farkas
    assert farkas[0] >= 0.0 >= farkas[1]
    assert farkas @ lp.matrix[:, 0] >= -1e-12
    assert farkas @ lp.rhs < 0.0

def test_empty_row_infeasible():
    """An all-zero row that can not hold is caught before pivoting."""
    lp = LinearProgram(objective=[1.0], matrix=[[0.0], [1.0]], senses=(GE, LE), rhs=[1.0, 1.0])
    solution = solve_lp(lp)
    assert solution.status is LpStatus.INFEASIBLE
    assert solution.iterations == 0
    np.testing.assert_array_equal(solution.farkas, [-1.0, 0.0])

def test_empty_row_dropped():
    """Satisfiable empty rows are removed and get a zero multiplier."""
    lp = LinearProgram(objective=[1.0], matrix=[[0.0], [1.0]], senses=(LE, LE), rhs=[5.0, 1.0])
    solution = solve_lp(lp)
    _assert_certified(solution)
    np.testing.assert_allclose(solution.duals, [0.0, 1.0])

def test_unbounded_with_ray():
    """maximize x + y s.t. x - y <= 1 is unbounded along an improving ray."""
    lp = LinearProgram(objective=[1.0, 1.0], matrix=[[1.0, -1.0]], senses=(LE,), rhs=[1.0])
    solution = solve_lp(lp)
    assert solution.status is LpStatus.UNBOUNDED
    ray = solution.ray
    assert lp.objective @ ray > 0.0
    assert lp.matrix[0] @ ray <= 1e-12
    assert np.all(ray >= -1e-12)

def test_bland_avoids_cycling():
    """The classic degenerate cycling example terminates at its optimum 1."""
    lp = LinearProgram(
        objective=[0.75, -150.0, 0.02, -6.0],
        matrix=[[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]],
        senses=(LE, LE, LE),
        rhs=[0.0, 0.0, 1.0],
    )
    solution = solve_lp(lp)
    _assert_certified(solution)
    assert solution.objective == pytest.approx(0.05)

def test_row_permutation_and_scaling_invariance(rng):
    """The optimal value ignores row order and positive row scaling."""
    for _ in range(25):
        rows, columns = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        matrix = rng.uniform(0.1, 2.0, size=(rows, columns))
        rhs = rng.uniform(0.5, 3.0, size=rows)
        objective = rng.uniform(-1.0, 2.0, size=columns)
        base = solve_lp(LinearProgram(objective=objective, matrix=matrix, senses=(LE,) * rows, rhs=rhs))
        _assert_certified(base)

        order = rng.permutation(rows)
        scale = rng.uniform(0.2, 5.0, size=rows)
        changed = solve_lp(LinearProgram(objective=objective, matrix=(matrix * scale[:, None])[order],
                                         senses=(LE,) * rows, rhs=(rhs * scale)[order]))
        _assert_certified(changed)
        assert changed.objective == pytest.approx(base.objective, abs=1e-8)

def test_repeat_solves_bit_identical(rng):
    """Resolving the same program gives identical arrays."""
    matrix = rng.uniform(-1.0, 2.0, size=(5, 6))
    lp = LinearProgram(objective=rng.uniform(size=6), matrix=matrix, senses=(LE, GE, LE, LE, EQ),
                       rhs=[2.0, -1.0, 3.0, 1.5, 0.5], upper=np.full(6, 4.0))
    first, second = solve_lp(lp), solve_lp(lp)
    assert first.status is second.status
    if first.is_optimal:
        assert np.array_equal(first.primal, second.primal)
        assert np.array_equal(first.duals, second.duals)
    assert first.iterations == second.iterations

def test_dump_stream():
    """The tableau dump writes one block per pivot."""
    stream = io.StringIO()
    solution = solve_lp(LinearProgram(objective=[1.0, 1.0], matrix=[[1.0, 2.0], [3.0, 1.0]], senses=(LE, LE),
                                      rhs=[4.0, 6.0]), dump=stream)
    _assert_certified(solution)
    assert stream.getvalue().count('enters at row') == solution.iterations

def test_invalid_programs():
    """Shape and bound mistakes are rejected at construction."""
    with pytest.raises(InvalidLinearProgram):
        LinearProgram(objective=[1.0, 1.0], matrix=[[1.0]], senses=(LE,), rhs=[1.0])
    with pytest.raises(InvalidLinearProgram):
        LinearProgram(objective=[1.0], matrix=[[1.0]], senses=(LE, LE), rhs=[1.0])
    with pytest.raises(InvalidLinearProgram):
        LinearProgram(objective=[1.0], matrix=[[1.0]], senses=(LE,), rhs=[1.0], lower=[2.0], upper=[1.0])
    with pytest.raises(InvalidLinearProgram):
        LinearProgram(objective=[1.0], matrix=[[1.0]], senses=('<>',), rhs=[1.0])

def test_string_senses_accepted():
    """Row senses may be given as their symbols."""
    lp = LinearProgram(objective=[1.0], matrix=[[1.0]], senses=('<=',), rhs=[2.0])
    assert lp.senses == (LE,)

def test_drifted_basis_is_refused(monkeypatch):
    """Basic values that break a row never come back as Optimal."""
    exact = simplex_module._basis_solve

    def drifted(*args):
        values, multipliers = exact(*args)
        return values + 0.1, multipliers

    monkeypatch.setattr(simplex_module, '_basis_solve', drifted)
    with pytest.raises(NumericalBreakdown, match='residual check'):
        solve_lp(LinearProgram(objective=[1.0], matrix=[[1.0]], senses=(LE,), rhs=[1.0]))

def test_infeasible_basis_repaired():
    """A dual feasible basis with a negative basic value is walked back to the optimum."""
    lp = LinearProgram(objective=[1.0, 1.0], matrix=[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], senses=(LE, LE, LE),
                       rhs=[1.0, 1.0, 1.5])
    form = simplex_module._standardize(lp)
    tableau = simplex_module._Tableau(form, None, 100)

    # x and y at their bounds leave the slack of x + y <= 1.5 at -0.5
    tableau.basis = [0, 1, 4]
    tableau.refactor()
    np.testing.assert_allclose(tableau.values, [1.0, 1.0, -0.5], atol=1e-12)

    tableau.restore_feasibility(form.cost, ~form.artificial, phase=2)
    assert tableau.basis == [0, 1, 2]
    np.testing.assert_allclose(tableau.values, [0.5, 1.0, 0.5], atol=1e-12)

def test_refactor_keeps_long_solves_certified(rng):
    """Programs needing more pivots than the refactorization period stay certified."""
    atoms = 150
    weights = rng.uniform(1e-6, 1.0, size=atoms)
    costs = weights * rng.uniform(0.5, 2.0, size=atoms)
    # Nine tenths of the full load fits, so most of the atoms have to enter the basis one pivot at a time
    lp = LinearProgram(objective=rng.uniform(0.1, 1.0, size=atoms), matrix=[costs], senses=(LE,),
                       rhs=[0.9 * float(costs @ weights)], upper=weights)
    solution = solve_lp(lp)
    _assert_certified(solution)
    assert solution.iterations > simplex_module.REFACTOR_EVERY
