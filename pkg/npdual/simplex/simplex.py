"""Dense two-phase primal simplex.

The user's program is first put in standard form: variables are shifted or split so they are
nonnegative, finite upper bounds become explicit rows, rows are flipped so every right-hand side is
nonnegative, and slack, surplus and artificial columns complete an identity starting basis. Bland's
rule picks both the entering and the leaving column, so pivoting is deterministic.

The tableau is rebuilt from the original matrix every REFACTOR_EVERY pivots and again at the end.
If the rebuilt basis turns out primal infeasible, dual simplex pivots restore feasibility and the
primal method resumes. The reported values and multipliers come from the refactorized basis with one
step of iterative refinement, and an optimal status is only returned when the residuals, measured in
the user's own variables, are within tolerance.
"""
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Set, TextIO, Tuple, Union

import numpy as np

from npdual.logger.core import CoreLogger
from npdual.simplex.exceptions import InvalidLinearProgram, NumericalBreakdown
from npdual.utils.constants import BREAKDOWN_PIVOT, FEAS_TOL, PIVOT_TOL

logger = CoreLogger(component='simplex')

# Ratios this close to the minimum are treated as ties for the leaving-row choice
RATIO_TIE = 1e-12

# Pivots between two rebuilds of the tableau from the original matrix
REFACTOR_EVERY = 50

# Rounds of primal pivoting, refactorization and repair before giving up
SETTLE_ROUNDS = 4


class RowSense(Enum):
    """Direction of a constraint row."""

    LE = '<='
    GE = '>='
    EQ = '='


class LpStatus(Enum):
    """Outcome of a solve."""

    OPTIMAL = 'Optimal'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'


def _vector(values, name: str, size: Optional[int] = None) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != 1:
        raise InvalidLinearProgram(f'{name} must be a vector, got shape {array.shape}')
    if size is not None and array.size != size:
        raise InvalidLinearProgram(f'{name} has {array.size} entries, expected {size}')
    if np.any(np.isnan(array)):
        raise InvalidLinearProgram(f'{name} contains NaN')
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """A dense linear program: optimize objective @ x subject to matrix @ x (senses) rhs and bounds.

    Bounds default to 0 <= x < +inf. A lower bound of -inf with an upper bound of +inf makes the
    variable free.
    """

    objective: np.ndarray
    matrix: np.ndarray
    senses: Tuple[RowSense, ...]
    rhs: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    maximize: bool = True

    def __post_init__(self):
        """Normalize the arrays and check the shapes and bounds."""
        objective = _vector(self.objective, 'objective')
        if objective.size == 0:
            raise InvalidLinearProgram('the program has no variables')
        if not np.all(np.isfinite(objective)):
            raise InvalidLinearProgram('objective coefficients must be finite')
        columns = objective.size

        matrix = np.array(self.matrix, dtype=float)
        if matrix.size == 0:
            matrix = matrix.reshape((0, columns))
        if matrix.ndim != 2 or matrix.shape[1] != columns:
            raise InvalidLinearProgram(f'matrix shape {matrix.shape} does not match {columns} variables')
        if not np.all(np.isfinite(matrix)):
            raise InvalidLinearProgram('matrix entries must be finite')
        matrix.setflags(write=False)
        rows = matrix.shape[0]

        try:
            senses = tuple(sense if isinstance(sense, RowSense) else RowSense(sense) for sense in self.senses)
        except ValueError as exc:
            raise InvalidLinearProgram(f'unknown row sense: {exc}') from exc
        if len(senses) != rows:
            raise InvalidLinearProgram(f'{len(senses)} row senses for {rows} rows')

        rhs = _vector(self.rhs if rows else np.zeros(0), 'rhs', rows)
        if not np.all(np.isfinite(rhs)):
            raise InvalidLinearProgram('right-hand sides must be finite')

        lower = _vector(np.zeros(columns) if self.lower is None else self.lower, 'lower', columns)
        upper = _vector(np.full(columns, np.inf) if self.upper is None else self.upper, 'upper', columns)
        for index in range(columns):
            if lower[index] == np.inf or upper[index] == -np.inf:
                raise InvalidLinearProgram(f'variable {index} has an empty bound interval')
            if lower[index] > upper[index]:
                raise InvalidLinearProgram(f'variable {index}: lower bound {lower[index]} > upper bound {upper[index]}')

        object.__setattr__(self, 'objective', objective)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'senses', senses)
        object.__setattr__(self, 'rhs', rhs)
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @property
    def rows(self) -> int:
        """Number of constraint rows."""
        return self.matrix.shape[0]

    @property
    def columns(self) -> int:
        """Number of variables."""
        return self.matrix.shape[1]


@dataclass(frozen=True)
class LpResiduals:
    """Optimality residuals, all measured in the user's variables and rows."""

    primal: float
    dual: float
    slackness: float
    objective_gap: float

    @property
    def worst(self) -> float:
        """Largest of the four residuals."""
        return max(self.primal, self.dual, self.slackness, self.objective_gap)


@dataclass(frozen=True, eq=False)
class LpSolution:
    """Result of solve_lp.

    duals are the shadow prices of the user's objective with respect to each row's right-hand
    side; reduced_costs are objective - matrix.T @ duals. farkas (Infeasible) is a row vector y with
    y @ matrix compatible with the bounds and y @ rhs of the wrong sign; ray (Unbounded) is a
    direction in variable space along which the objective grows without limit. tolerance is the
    residual bound an Optimal solution was held to: FEAS_TOL times the largest of 1, |rhs| and
    |objective|.
    """

    status: LpStatus
    iterations: int
    primal: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    reduced_costs: Optional[np.ndarray] = None
    objective: Optional[float] = None
    residuals: Optional[LpResiduals] = None
    farkas: Optional[np.ndarray] = None
    ray: Optional[np.ndarray] = None
    tolerance: float = FEAS_TOL

    @property
    def is_optimal(self) -> bool:
        """True when an optimal vertex was found."""
        return self.status is LpStatus.OPTIMAL

    def certified(self, tol: Optional[float] = None) -> bool:
        """True when the solution is optimal and every residual is within tol (default: tolerance)."""
        bound = self.tolerance if tol is None else tol
        return self.is_optimal and self.residuals is not None and self.residuals.worst <= bound


@dataclass
class _StandardForm:
    """max cost @ x subject to matrix @ x = rhs, x >= 0, with the bookkeeping to map back."""

    matrix: np.ndarray
    rhs: np.ndarray
    cost: np.ndarray
    basis: List[int]
    artificial: np.ndarray
    structural: int
    offset: np.ndarray
    transform: np.ndarray
    row_origin: List[int]
    flip: np.ndarray
    sign: float


def _standardize(lp: LinearProgram) -> Union[_StandardForm, LpSolution]:
    """Build the standard form, or return an Infeasible solution found while dropping empty rows."""
    offset = np.zeros(lp.columns)
    columns: List[Tuple[int, float]] = []
    bound_rows: List[Tuple[int, float]] = []
    for index in range(lp.columns):
        low, high = lp.lower[index], lp.upper[index]
        if np.isfinite(low):
            offset[index] = low
            columns.append((index, 1.0))
            if np.isfinite(high):
                bound_rows.append((len(columns) - 1, high - low))
        elif np.isfinite(high):
            offset[index] = high
            columns.append((index, -1.0))
        else:
            columns.append((index, 1.0))
            columns.append((index, -1.0))

    transform = np.zeros((lp.columns, len(columns)))
    for position, (index, direction) in enumerate(columns):
        transform[index, position] = direction

    sign = 1.0 if lp.maximize else -1.0
    row_matrix = lp.matrix @ transform
    row_rhs = lp.rhs - lp.matrix @ offset

    matrix_rows: List[np.ndarray] = []
    rhs: List[float] = []
    senses: List[RowSense] = []
    row_origin: List[int] = []
    for index in range(lp.rows):
        if not np.any(row_matrix[index]):
            value, sense = row_rhs[index], lp.senses[index]
            feasible = ((sense is RowSense.LE and value >= -FEAS_TOL)
                        or (sense is RowSense.GE and value <= FEAS_TOL)
                        or (sense is RowSense.EQ and abs(value) <= FEAS_TOL))
            if not feasible:
                farkas = np.zeros(lp.rows)
                farkas[index] = 1.0 if value < 0.0 else -1.0
                logger.debug(f'Row {index} has no coefficients and can not hold')
                return LpSolution(status=LpStatus.INFEASIBLE, iterations=0, farkas=farkas)
            continue
        matrix_rows.append(row_matrix[index])
        rhs.append(row_rhs[index])
        senses.append(lp.senses[index])
        row_origin.append(index)

    for position, capacity in bound_rows:
        row = np.zeros(len(columns))
        row[position] = 1.0
        matrix_rows.append(row)
        rhs.append(capacity)
        senses.append(RowSense.LE)
        row_origin.append(-1)

    count = len(rhs)
    structural = len(columns)
    flip = np.ones(count)
    base = np.vstack(matrix_rows) if matrix_rows else np.zeros((0, structural))
    rhs_array = np.array(rhs, dtype=float)
    for row in range(count):
        if rhs_array[row] < 0.0:
            flip[row] = -1.0
            base[row] = -base[row]
            rhs_array[row] = -rhs_array[row]
            if senses[row] is RowSense.LE:
                senses[row] = RowSense.GE
            elif senses[row] is RowSense.GE:
                senses[row] = RowSense.LE

    slack_rows = [row for row in range(count) if senses[row] is not RowSense.EQ]
    artificial_rows = [row for row in range(count) if senses[row] is not RowSense.LE]
    width = structural + len(slack_rows) + len(artificial_rows)

    matrix = np.zeros((count, width))
    matrix[:, :structural] = base
    basis = [-1] * count
    for position, row in enumerate(slack_rows):
        column = structural + position
        if senses[row] is RowSense.LE:
            matrix[row, column] = 1.0
            basis[row] = column
        else:
            matrix[row, column] = -1.0
    artificial = np.zeros(width, dtype=bool)
    for position, row in enumerate(artificial_rows):
        column = structural + len(slack_rows) + position
        matrix[row, column] = 1.0
        artificial[column] = True
        basis[row] = column

    cost = np.zeros(width)
    cost[:structural] = sign * (transform.T @ lp.objective)

    return _StandardForm(matrix=matrix, rhs=rhs_array, cost=cost, basis=basis, artificial=artificial,
                         structural=structural, offset=offset, transform=transform, row_origin=row_origin,
                         flip=flip, sign=sign)


class _Tableau:
    """Dense tableau [B^-1 A | B^-1 b] owned by one solve."""

    def __init__(self, form: _StandardForm, dump: Optional[TextIO], max_iterations: int):
        """Start from the identity basis of the standard form."""
        self.table = np.hstack([form.matrix, form.rhs[:, None]])
        self.basis = list(form.basis)
        self.iterations = 0
        self.smallest_pivot = np.inf
        self._form = form
        self._dump = dump
        self._max_iterations = max_iterations

    @property
    def values(self) -> np.ndarray:
        """Current values of the basic variables."""
        return self.table[:, -1]

    def breakdown(self, reason: str) -> NumericalBreakdown:
        """The exception for reason, carrying the pivot statistics so far."""
        return NumericalBreakdown(reason, self.iterations, self.smallest_pivot)

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        """Reduced costs of every column under the current basis."""
        return cost - cost[self.basis] @ self.table[:, :-1]

    def refactor(self) -> None:
        """Rebuild [B^-1 A | B^-1 b] from the original matrix, dropping accumulated round-off."""
        if not self.basis:
            return
        basis = self._form.matrix[:, self.basis]
        try:
            table = np.linalg.solve(basis, np.hstack([self._form.matrix, self._form.rhs[:, None]]))
            table[:, -1] = _refined_solve(basis, self._form.rhs, table[:, -1])
        except np.linalg.LinAlgError as exc:
            raise self.breakdown('basis became singular') from exc
        table[:, self.basis] = np.eye(len(self.basis))
        self.table = table

    def pivot(self, row: int, column: int) -> None:
        """Make column basic in row."""
        value = self.table[row, column]
        self.smallest_pivot = min(self.smallest_pivot, abs(value))
        if abs(value) < BREAKDOWN_PIVOT:
            raise NumericalBreakdown('pivot element vanished', self.iterations, self.smallest_pivot)

        self.table[row] /= value
        factors = self.table[:, column].copy()
        factors[row] = 0.0
        self.table -= np.outer(factors, self.table[row])
        self.table[:, column] = 0.0
        self.table[row, column] = 1.0

        # Round-off below the pivot tolerance must not make a basic value negative
        rhs = self.table[:, -1]
        rhs[(rhs < 0.0) & (rhs > -PIVOT_TOL)] = 0.0

        self.basis[row] = column
        self.iterations += 1

    def run(self, cost: np.ndarray, eligible: np.ndarray, phase: int) -> Optional[int]:
        """Pivot with Bland's rule until optimal.

        Returns:
            Optional[int]: None at optimality, otherwise the entering column with no blocking row
        """
        seen = {frozenset(self.basis)}
        while True:
            reduced = self.reduced_costs(cost)
            candidates = np.flatnonzero(eligible & (reduced > PIVOT_TOL))
            if not candidates.size:
                return None

            entering = int(candidates[0])
            column = self.table[:, entering]
            blocking = np.flatnonzero(column > PIVOT_TOL)
            if not blocking.size:
                return entering

            ratios = self.table[blocking, -1] / column[blocking]
            best = ratios.min()
            ties = blocking[ratios <= best + RATIO_TIE * max(1.0, abs(best))]
            leaving = int(min(ties, key=lambda row: self.basis[row]))

            self._step(leaving, entering, phase, seen)
            if self.iterations % REFACTOR_EVERY == 0:
                self.refactor()
                # The primal ratio test needs nonnegative values; the final refactorization checks them
                np.maximum(self.table[:, -1], 0.0, out=self.table[:, -1])

    def restore_feasibility(self, cost: np.ndarray, eligible: np.ndarray, phase: int) -> None:
        """Dual simplex pivots until every basic value is >= -FEAS_TOL.

        The most negative basic value leaves; the entering column is the one keeping the reduced costs
        nonpositive, lowest index on ties.
        """
        seen = {frozenset(self.basis)}
        while True:
            values = self.values
            infeasible = np.flatnonzero(values < -FEAS_TOL)
            if not infeasible.size:
                return

            leaving = int(min(infeasible, key=lambda row: (values[row], self.basis[row])))
            row = self.table[leaving, :-1]
            candidates = np.flatnonzero(eligible & (row < -PIVOT_TOL))
            if not candidates.size:
                raise self.breakdown('refactorized basis is infeasible and no pivot repairs it')

            ratios = np.maximum(-self.reduced_costs(cost)[candidates], 0.0) / -row[candidates]
            best = ratios.min()
            entering = int(candidates[ratios <= best + RATIO_TIE * max(1.0, best)][0])
            self._step(leaving, entering, phase, seen)

    def _step(self, leaving: int, entering: int, phase: int, seen: Set[FrozenSet[int]]) -> None:
        self.pivot(leaving, entering)
        self._write(phase, entering, leaving)

        key = frozenset(self.basis)
        if key in seen:
            raise self.breakdown('basis repeated despite Bland\'s rule')
        seen.add(key)

        if self.iterations >= self._max_iterations:
            raise self.breakdown('iteration limit reached')

    def _write(self, phase: int, entering: int, leaving: int) -> None:
        if self._dump is None:
            return
        self._dump.write(f'phase {phase} iteration {self.iterations}: column {entering} enters at row {leaving}\n')
        self._dump.write(np.array2string(self.table, precision=6, suppress_small=True, max_line_width=160))
        self._dump.write('\n')


def _residuals(lp: LinearProgram, primal: np.ndarray, duals: np.ndarray, reduced: np.ndarray) -> LpResiduals:
    """Primal/dual feasibility, complementary slackness and the objective gap."""
    sign = 1.0 if lp.maximize else -1.0
    activity = lp.matrix @ primal
    row_slack = lp.rhs - activity

    violations = [0.0]
    for index, sense in enumerate(lp.senses):
        if sense is RowSense.LE:
            violations.append(-row_slack[index])
        elif sense is RowSense.GE:
            violations.append(row_slack[index])
        else:
            violations.append(abs(row_slack[index]))
    violations.extend(lp.lower - primal)
    violations.extend(primal - lp.upper)
    primal_residual = max(0.0, float(np.max(violations)))

    signed_duals = sign * duals
    dual_violations = [0.0]
    for index, sense in enumerate(lp.senses):
        if sense is RowSense.LE:
            dual_violations.append(-signed_duals[index])
        elif sense is RowSense.GE:
            dual_violations.append(signed_duals[index])

    slackness = [0.0] + list(np.abs(duals * row_slack))
    dual_objective = float(lp.rhs @ duals)
    for index, value in enumerate(sign * reduced):
        if value > 0.0:
            if np.isfinite(lp.upper[index]):
                slackness.append(abs(reduced[index] * (lp.upper[index] - primal[index])))
                dual_objective += reduced[index] * lp.upper[index]
            else:
                dual_violations.append(value)
        elif value < 0.0:
            if np.isfinite(lp.lower[index]):
                slackness.append(abs(reduced[index] * (primal[index] - lp.lower[index])))
                dual_objective += reduced[index] * lp.lower[index]
            else:
                dual_violations.append(-value)

    return LpResiduals(
        primal=primal_residual,
        dual=max(0.0, float(np.max(dual_violations))),
        slackness=float(np.max(slackness)),
        objective_gap=abs(float(lp.objective @ primal) - dual_objective),
    )


def _refined_solve(matrix: np.ndarray, rhs: np.ndarray, start: Optional[np.ndarray] = None) -> np.ndarray:
    """Solve matrix @ x = rhs followed by one step of iterative refinement."""
    values = np.linalg.solve(matrix, rhs) if start is None else start
    return values + np.linalg.solve(matrix, rhs - matrix @ values)


def _basis_solve(form: _StandardForm, basis: Sequence[int], cost: np.ndarray,
                 tableau: _Tableau) -> Tuple[np.ndarray, np.ndarray]:
    """Re-factorize the basis: basic values B^-1 b and multipliers B^-T c_B."""
    if not basis:
        return np.zeros(0), np.zeros(0)
    matrix = form.matrix[:, list(basis)]
    try:
        values = _refined_solve(matrix, form.rhs)
        multipliers = _refined_solve(matrix.T, cost[list(basis)])
    except np.linalg.LinAlgError as exc:
        raise tableau.breakdown('final basis is singular') from exc
    return values, multipliers


def _user_rows(lp: LinearProgram, form: _StandardForm, multipliers: np.ndarray) -> np.ndarray:
    """Map standard-form row multipliers back onto the user's rows."""
    result = np.zeros(lp.rows)
    for row, origin in enumerate(form.row_origin):
        if origin >= 0:
            result[origin] = form.flip[row] * multipliers[row]
    return result


def _settle(tableau: _Tableau, form: _StandardForm) -> Optional[int]:
    """Phase two until the refactorized basis is both feasible and optimal.

    Returns:
        Optional[int]: None once settled, otherwise the entering column with no blocking row
    """
    eligible = ~form.artificial
    for _ in range(SETTLE_ROUNDS):
        entering = tableau.run(form.cost, eligible, phase=2)
        if entering is not None:
            return entering

        tableau.refactor()
        if np.any(tableau.values < -FEAS_TOL):
            logger.debug(f'Refactorized basis is infeasible by {-float(tableau.values.min()):.3e}, repairing')
            tableau.restore_feasibility(form.cost, eligible, phase=2)
            continue
        if not np.any(eligible & (tableau.reduced_costs(form.cost) > PIVOT_TOL)):
            return None
    raise tableau.breakdown('basis did not settle after refactorization')


def solve_lp(lp: LinearProgram, dump: Optional[TextIO] = None,
             max_iterations: Optional[int] = None) -> LpSolution:
    """Solve a linear program with the two-phase primal simplex method.

    Args:
        lp (LinearProgram): The program to solve
        dump (Optional[TextIO], optional): Stream receiving the tableau after every pivot. Defaults to None.
        max_iterations (Optional[int], optional): Pivot limit. Defaults to a multiple of the tableau size.

    Raises:
        NumericalBreakdown: Pivoting cycled or hit the limit, a basis became singular, or the optimal
            basis fails its residual check.

    Returns:
        LpSolution: Optimal with certified residuals, or Infeasible/Unbounded with a witness
    """
    form = _standardize(lp)
    if isinstance(form, LpSolution):
        return form

    rows, width = form.matrix.shape
    if max_iterations is None:
        max_iterations = 50 * (rows + width) + 1000
    logger.debug(f'Standard form: {rows} rows, {width} columns ({int(form.artificial.sum())} artificial)')

    tableau = _Tableau(form, dump, max_iterations)

    if form.artificial.any():
        phase_one = np.where(form.artificial, -1.0, 0.0)
        tableau.run(phase_one, np.ones(width, dtype=bool), phase=1)
        tableau.refactor()
        tableau.restore_feasibility(phase_one, np.ones(width, dtype=bool), phase=1)
        infeasibility = float(tableau.values[form.artificial[tableau.basis]].sum())
        if infeasibility > FEAS_TOL * (1.0 + float(np.max(form.rhs, initial=0.0))):
            _, multipliers = _basis_solve(form, tableau.basis, phase_one, tableau)
            logger.debug(f'Phase one ended with infeasibility {infeasibility:.3e}')
            return LpSolution(status=LpStatus.INFEASIBLE, iterations=tableau.iterations,
                              farkas=_user_rows(lp, form, multipliers))

        # Drive artificials that stayed basic at zero level out of the basis, on the largest entry
        for row in range(rows):
            if not form.artificial[tableau.basis[row]]:
                continue
            entries = np.where(form.artificial, 0.0, np.abs(tableau.table[row, :-1]))
            column = int(np.argmax(entries))
            if entries[column] > PIVOT_TOL:
                tableau.pivot(row, column)

    entering = _settle(tableau, form)
    if entering is not None:
        direction = np.zeros(width)
        direction[entering] = 1.0
        for row, column in enumerate(tableau.basis):
            direction[column] -= tableau.table[row, entering]
        ray = form.transform @ direction[:form.structural]
        logger.debug(f'Unbounded along column {entering}')
        return LpSolution(status=LpStatus.UNBOUNDED, iterations=tableau.iterations, ray=ray)

    values, multipliers = _basis_solve(form, tableau.basis, form.cost, tableau)
    solution = np.zeros(width)
    solution[tableau.basis] = values

    primal = form.offset + form.transform @ solution[:form.structural]
    duals = form.sign * _user_rows(lp, form, multipliers)
    reduced = lp.objective - lp.matrix.T @ duals
    residuals = _residuals(lp, primal, duals, reduced)

    tolerance = FEAS_TOL * max(1.0, float(np.max(np.abs(lp.rhs), initial=0.0)), float(np.max(np.abs(lp.objective))))
    if residuals.worst > tolerance:
        raise tableau.breakdown(f'optimal basis fails its residual check ({residuals.worst:.3e} > {tolerance:.1e})')

    # Only round-off within the residual tolerance is clipped away
    primal = np.clip(primal, lp.lower, lp.upper)
    logger.debug(f'Optimal after {tableau.iterations} pivots, worst residual {residuals.worst:.3e}')
    return LpSolution(
        status=LpStatus.OPTIMAL,
        iterations=tableau.iterations,
        primal=primal,
        duals=duals,
        reduced_costs=reduced,
        objective=float(lp.objective @ primal),
        residuals=residuals,
        tolerance=tolerance,
    )
