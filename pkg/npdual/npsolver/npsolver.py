"""Solve the max-min testing problem and assemble the optimal test, the dual pair and the three values."""
from dataclasses import dataclass, replace
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from npdual.logger.core import CoreLogger
from npdual.model import (HypothesisFamily, Prior, RandomizedTest, Side,
                          TestingProblem, ensure_valid, evaluate_power,
                          evaluate_size, mixture_density, validate_problem)
from npdual.model.exceptions import DimensionMismatch
from npdual.npsolver.exceptions import (DegeneratePrior, InternalError,
                                        InvalidGrid, InvalidWeights)
from npdual.npsolver.formulation import (build_maxmin_lp, build_middle_lp,
                                         phi_from_masses, row_blocks)
from npdual.simplex import LpSolution, solve_lp
from npdual.utils.constants import (CONVEXITY_TOL, INGEST_SUM_TOL, TOL_CHAIN,
                                    TOL_GAP)

logger = CoreLogger(component='npsolver')


@dataclass(frozen=True, eq=False)
class PrimalSolution:
    """The optimal test phi~ with its worst-case power and per-member sizes and powers."""

    test: RandomizedTest
    value: float
    sizes: np.ndarray
    powers: np.ndarray


@dataclass(frozen=True, eq=False)
class DualSolution:
    """The least favorable pair: mixture weights q over the alternative members and the prior lambda~."""

    alt_weights: np.ndarray
    prior: Prior
    value: float


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Everything solve_maxmin learns about a problem.

    lower_value is the power of phi~, middle_value the best power against the mixed alternative
    over the size-feasible tests, dual_value the dual objective at (q, lambda~). upper_mass is the
    total multiplier on the phi <= 1 rows, which equals E^R[(Z_Q - mix)^+] at optimality.
    """

    primal: PrimalSolution
    dual: DualSolution
    lower_value: float
    middle_value: float
    dual_value: float
    gap: float
    upper_mass: float
    iterations: int
    lp_residual: float

    def chain_holds(self, tol: float) -> bool:
        """lower_value <= middle_value <= dual_value up to tol."""
        return self.lower_value <= self.middle_value + tol and self.middle_value <= self.dual_value + tol


def _alt_weights(problem: TestingProblem, alt_weights: Sequence[float]) -> np.ndarray:
    weights = np.asarray(alt_weights, dtype=float)
    if weights.shape != (len(problem.alt_family),):
        raise DimensionMismatch(field='q', reason=f'{weights.size} weights for {len(problem.alt_family)} members')
    if np.any(~np.isfinite(weights)) or np.any(weights < -INGEST_SUM_TOL):
        raise InvalidWeights(field='q', reason='weights must be nonnegative')
    if abs(float(weights.sum()) - 1.0) > INGEST_SUM_TOL:
        raise InvalidWeights(field='q', reason=f'weights sum to {float(weights.sum())!r}, not 1')
    return np.maximum(weights, 0.0)


def _prior_weights(problem: TestingProblem, prior: Union[Prior, Sequence[float]]) -> np.ndarray:
    weights = prior.weights if isinstance(prior, Prior) else np.asarray(prior, dtype=float)
    if weights.shape != (len(problem.null_family),):
        raise DimensionMismatch(field='lambda', reason=f'{weights.size} weights for {len(problem.null_family)} members')
    if np.any(~np.isfinite(weights)) or np.any(weights < 0.0):
        raise InvalidWeights(field='lambda', reason='weights must be finite and >= 0')
    return weights


def dual_objective(problem: TestingProblem, alt_weights: Sequence[float],
                   prior: Union[Prior, Sequence[float]]) -> float:
    """D(Q, lambda) = E^R[(Z_Q - sum_i lambda_i Z_Pi)^+] + sum_i alpha_i lambda_i.

    Raises:
        DimensionMismatch: When the weight vectors do not match the families.
        InvalidWeights: When q leaves the simplex or lambda has a negative entry.
    """
    weights = _alt_weights(problem, alt_weights)
    prior_weights = _prior_weights(problem, prior)

    alternative = weights @ problem.alt_family.matrix
    mixture = mixture_density(problem.null_family, prior_weights).values
    excess = np.maximum(alternative - mixture, 0.0)
    return float(problem.reference.weights @ excess + problem.levels @ prior_weights)


def _checked(solution: LpSolution) -> LpSolution:
    """Refuse anything but an optimal solution with certified residuals."""
    if not solution.is_optimal:
        raise InternalError(status=solution.status.value)
    if not solution.certified():
        raise InternalError(status=f'Optimal with residual {solution.residuals.worst:.3e}')
    return solution


def solve_maxmin(problem: TestingProblem, dump: Optional[TextIO] = None) -> SolveReport:
    """Find the optimal test and the least favorable pair of a testing problem.

    The alternative multipliers of the max-min program, normalized, are the mixture weights q; the
    null multipliers are lambda~ as they come. A second program maximizes the power against the
    mixed alternative to produce the middle value.

    Args:
        problem (TestingProblem): The problem; validated here if it was not already
        dump (Optional[TextIO], optional): Stream for the simplex tableau dump. Defaults to None.

    Raises:
        InternalError: When either program is not solved to optimality with certified residuals.
        NumericalBreakdown: Propagated from the simplex.

    Returns:
        SolveReport: The solution, the three values and the gap
    """
    problem = ensure_valid(problem)
    blocks = row_blocks(problem)

    solution = _checked(solve_lp(build_maxmin_lp(problem), dump=dump))

    test = RandomizedTest.clipped(phi_from_masses(problem, solution.primal[:problem.size]))
    power = evaluate_power(problem, test)
    size = evaluate_size(problem, test)

    alt_multipliers = np.maximum(solution.duals[blocks.alternative], 0.0)
    if alt_multipliers.sum() <= 0.0:
        raise InternalError(status='Optimal without alternative multipliers')
    alt_weights = alt_multipliers / alt_multipliers.sum()
    prior = Prior.clipped(solution.duals[blocks.null])
    upper_mass = float(problem.reference.weights @ np.maximum(solution.duals[blocks.unit], 0.0))

    middle = _checked(solve_lp(build_middle_lp(problem, alt_weights), dump=dump))

    dual_value = dual_objective(problem, alt_weights, prior)
    report = SolveReport(
        primal=PrimalSolution(test=test, value=power.value, sizes=size.per_member, powers=power.per_member),
        dual=DualSolution(alt_weights=alt_weights, prior=prior, value=dual_value),
        lower_value=power.value,
        middle_value=float(middle.objective),
        dual_value=dual_value,
        gap=dual_value - power.value,
        upper_mass=upper_mass,
        iterations=solution.iterations + middle.iterations,
        lp_residual=max(solution.residuals.worst, middle.residuals.worst),
    )

    logger.log(f'Solved {problem.size} atoms: lower={report.lower_value:.10g} '
               f'middle={report.middle_value:.10g} dual={report.dual_value:.10g} gap={report.gap:.3e}')
    if report.gap > TOL_GAP:
        logger.warning(f'Duality gap {report.gap:.3e} exceeds {TOL_GAP:g}')
    if not report.chain_holds(TOL_CHAIN):
        logger.warning(f'Value chain lower <= middle <= dual broken beyond {TOL_CHAIN:g}')
    return report


@dataclass(frozen=True)
class DualRayScan:
    """The dual objective sampled along scale * direction."""

    scales: np.ndarray
    values: np.ndarray
    convex: bool

    @property
    def minimum_index(self) -> int:
        """Position of the smallest sampled value (first one on ties)."""
        return int(np.argmin(self.values))

    @property
    def minimum_scale(self) -> float:
        """Scale at which the smallest value was sampled."""
        return float(self.scales[self.minimum_index])

    @property
    def minimum_value(self) -> float:
        """Smallest sampled value."""
        return float(self.values[self.minimum_index])


def scan_dual_ray(problem: TestingProblem, alt_weights: Sequence[float], direction: Sequence[float],
                  grid: Sequence[float]) -> DualRayScan:
    """Evaluate D(Q, s * direction) for every scale s in grid and check the curve is convex.

    Convexity is judged on consecutive slopes, which tolerates unevenly spaced grids.

    Raises:
        DimensionMismatch: When the weights or the direction do not match the families.
        InvalidWeights: When q leaves the simplex or the direction has a negative entry.
        InvalidGrid: When a scale is negative or the grid is not strictly increasing.
    """
    ray = _prior_weights(problem, direction)
    scales = np.asarray(grid, dtype=float)
    if scales.ndim != 1 or scales.size == 0:
        raise InvalidGrid('the grid must be a non-empty list of scales')
    if np.any(scales < 0.0):
        raise InvalidGrid('scales must be >= 0')
    if np.any(np.diff(scales) <= 0.0):
        raise InvalidGrid('scales must be strictly increasing')

    values = np.array([dual_objective(problem, alt_weights, scale * ray) for scale in scales])

    convex = True
    if scales.size >= 3:
        slopes = np.diff(values) / np.diff(scales)
        convex = bool(np.all(np.diff(slopes) >= -CONVEXITY_TOL))
    if not convex:
        logger.warning('Sampled dual objective is not convex along the ray')

    return DualRayScan(scales=scales, values=values, convex=convex)


def reduce_to_simple(problem: TestingProblem, prior: Union[Prior, Sequence[float]]) -> TestingProblem:
    """Replace the null family by the single normalized prior mixture.

    The new level is the prior average of the member levels, which is alpha itself when alpha is
    scalar.

    Raises:
        DegeneratePrior: When the prior has zero total mass.
    """
    problem = ensure_valid(problem)
    weights = _prior_weights(problem, prior)
    mixture = mixture_density(problem.null_family, weights)
    if mixture.normalized is None:
        raise DegeneratePrior('a zero prior has no normalized mixture')

    level = float(problem.levels @ weights) / mixture.total_mass
    if problem.scalar_alpha is not None:
        level = problem.scalar_alpha

    reduced = replace(
        problem,
        null_family=HypothesisFamily(members=(mixture.normalized,), side=Side.NULL, labels=('mixture',)),
        alpha=level,
        validated=False,
    )
    return validate_problem(reduced)
