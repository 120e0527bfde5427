"""Independent answers to check the solver against."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from npdual.logger.core import CoreLogger
from npdual.model import RandomizedTest, TestingProblem, ensure_valid
from npdual.model.exceptions import DimensionMismatch
from npdual.oracle.exceptions import InvalidSteps, NotSingleton, TooLarge
from npdual.utils.constants import GRID_CHUNK, GRID_FEAS_TOL, GRID_LIMIT

logger = CoreLogger(component='oracle')


@dataclass(frozen=True, eq=False)
class ClassicNpResult:
    """The most powerful level-alpha test of one null density against one alternative density.

    The test rejects where the likelihood ratio exceeds quantile, randomizes with delta where it
    equals quantile and accepts below.
    """

    ratio: np.ndarray
    quantile: float
    delta: float
    test: RandomizedTest
    power: float
    size: float

    @property
    def prior(self) -> np.ndarray:
        """The prior certifying the test: mass quantile on the single null member."""
        return np.array([self.quantile])


def _likelihood_ratio(null_density: np.ndarray, alt_density: np.ndarray) -> np.ndarray:
    """Z_Q / Z_P, +inf where only Z_Q charges the atom and 0 where neither does."""
    ratio = np.zeros(null_density.size)
    positive = null_density > 0.0
    ratio[positive] = alt_density[positive] / null_density[positive]
    ratio[~positive & (alt_density > 0.0)] = np.inf
    return ratio


def classic_np(weights: Sequence[float], null_density: Sequence[float], alt_density: Sequence[float],
               alpha: float) -> ClassicNpResult:
    """Closed-form randomized likelihood ratio test.

    The quantile is the smallest z in {0} and the finite ratio values with P(L > z) <= alpha. When it
    is zero, the test rejects exactly where L > 0 and its size may fall short of alpha.

    Raises:
        DimensionMismatch: When the vectors differ in length.
    """
    reference = np.asarray(weights, dtype=float)
    null = np.asarray(null_density, dtype=float)
    alt = np.asarray(alt_density, dtype=float)
    if null.shape != reference.shape:
        raise DimensionMismatch(field='null', reason=f'{null.size} values for {reference.size} atoms')
    if alt.shape != reference.shape:
        raise DimensionMismatch(field='alt', reason=f'{alt.size} values for {reference.size} atoms')

    null_mass = reference * null
    alt_mass = reference * alt
    ratio = _likelihood_ratio(null, alt)

    candidates = np.unique(np.concatenate([[0.0], ratio[np.isfinite(ratio)]]))
    quantile = float(candidates[-1])
    for candidate in candidates:
        if null_mass[ratio > candidate].sum() <= alpha:
            quantile = float(candidate)
            break

    above = ratio > quantile
    values = above.astype(float)
    delta = 0.0
    if quantile > 0.0:
        at = ratio == quantile
        delta = float(np.clip((alpha - null_mass[above].sum()) / null_mass[at].sum(), 0.0, 1.0))
        values[at] = delta

    test = RandomizedTest(values)
    return ClassicNpResult(
        ratio=ratio,
        quantile=quantile,
        delta=delta,
        test=test,
        power=float(alt_mass @ values),
        size=float(null_mass @ values),
    )


def classic_np_problem(problem: TestingProblem) -> ClassicNpResult:
    """classic_np for a problem whose families each have a single member.

    Raises:
        NotSingleton: When either family has more than one member.
    """
    problem = ensure_valid(problem)
    if len(problem.null_family) != 1 or len(problem.alt_family) != 1:
        raise NotSingleton(f'closed form needs one null and one alternative member, got '
                           f'{len(problem.null_family)} and {len(problem.alt_family)}')
    return classic_np(problem.reference.weights, problem.null_family.matrix[0], problem.alt_family.matrix[0],
                      float(problem.levels[0]))


@dataclass(frozen=True, eq=False)
class GridResult:
    """Best worst-case power over the size-feasible points of the grid {0, 1/steps, ..., 1}^atoms."""

    value: float
    test: RandomizedTest
    steps: int
    points: int
    feasible: int


def _grid_chunk(problem: TestingProblem, steps: int, start: int, stop: int) -> Tuple[float, int, int]:
    """Best (value, index) in [start, stop) and the number of feasible points there."""
    base = steps + 1
    indices = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((indices.size, problem.size))
    for atom in range(problem.size):
        digits[:, atom] = (indices // base ** (problem.size - 1 - atom)) % base
    tests = digits / steps

    feasible = np.all(tests @ problem.null_weighted.T <= problem.levels + GRID_FEAS_TOL, axis=1)
    powers = np.where(feasible, np.min(tests @ problem.alt_weighted.T, axis=1), -np.inf)
    best = int(np.argmax(powers))
    return float(powers[best]), start + best, int(feasible.sum())


def _grid_point(problem: TestingProblem, steps: int, index: int) -> np.ndarray:
    base = steps + 1
    digits = [(index // base ** (problem.size - 1 - atom)) % base for atom in range(problem.size)]
    return np.array(digits, dtype=float) / steps


def grid_bruteforce(problem: TestingProblem, steps: int, workers: Optional[int] = None) -> GridResult:
    """Enumerate every grid test, keeping the most powerful one that meets all levels.

    Chunks of the grid are evaluated on a thread pool and reduced in grid order, so ties go to the
    lowest grid index whatever the scheduling.

    Raises:
        InvalidSteps: When steps < 1.
        TooLarge: When (steps + 1)^atoms exceeds 10^7.
    """
    problem = ensure_valid(problem)
    if isinstance(steps, bool) or not isinstance(steps, (int, np.integer)) or steps < 1:
        raise InvalidSteps(f'steps must be a positive integer, got {steps!r}')

    points = (int(steps) + 1) ** problem.size
    if points > GRID_LIMIT:
        raise TooLarge(points=points, limit=GRID_LIMIT)

    bounds = [(start, min(start + GRID_CHUNK, points)) for start in range(0, points, GRID_CHUNK)]
    logger.debug(f'Enumerating {points} grid points in {len(bounds)} chunks')

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_grid_chunk, problem, int(steps), start, stop) for start, stop in bounds]
        results: List[Tuple[float, int, int]] = [future.result() for future in futures]

    best_value, best_index = -np.inf, 0
    feasible = 0
    for value, index, count in results:
        feasible += count
        if value > best_value:
            best_value, best_index = value, index

    test = RandomizedTest(_grid_point(problem, int(steps), best_index))
    return GridResult(value=best_value, test=test, steps=int(steps), points=points, feasible=feasible)
