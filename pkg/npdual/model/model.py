"""Domain types for measures, densities, tests and priors on a finite sample space."""
from dataclasses import dataclass, field, replace
from enum import Enum, auto
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from npdual.logger.core import CoreLogger
from npdual.model.exceptions import (AlphaOutOfRange, DimensionMismatch,
                                     DuplicateAtom, DuplicateMember,
                                     EmptyFamily, InvalidPrior,
                                     InvalidReferenceMeasure, InvalidTest,
                                     NegativeDensity, UnnormalizedDensity)
from npdual.utils.constants import (DENSITY_NORM_TOL, DUPLICATE_TOL,
                                    WEIGHT_SUM_TOL)
from npdual.utils.numbers import OPEN_UNIT, POSITIVE

logger = CoreLogger(component='model')


def _frozen(values, name: str) -> np.ndarray:
    """Copy values into a read-only float vector."""
    array = np.array(values, dtype=float)
    if array.ndim != 1:
        raise DimensionMismatch(field=name, reason=f'expected a flat list of numbers, got shape {array.shape}')
    array.setflags(write=False)
    return array


class Side(Enum):
    """Which hypothesis a family describes."""

    NULL = auto()
    ALTERNATIVE = auto()

    @property
    def field(self) -> str:
        """Field name used by the problem file and by error messages."""
        return 'null' if self is Side.NULL else 'alt'


@dataclass(frozen=True, eq=False)
class ReferenceMeasure:
    """The finite sample space with strictly positive probability weights."""

    atoms: Tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        """Freeze the arrays and check the weight invariants."""
        atoms = tuple(str(atom) for atom in self.atoms)
        weights = _frozen(self.weights, 'R')
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

        if not atoms:
            raise InvalidReferenceMeasure(field='atoms', reason='at least one atom is required')

        if len(atoms) != weights.size:
            raise DimensionMismatch(field='R', reason=f'{weights.size} weights for {len(atoms)} atoms')

        seen = {}
        for index, atom in enumerate(atoms):
            if atom in seen:
                raise DuplicateAtom(field='atoms', index=index, reason=f'label "{atom}" repeats atoms[{seen[atom]}]')
            seen[atom] = index

        for index, weight in enumerate(weights):
            if not np.isfinite(weight) or weight <= 0.0:
                raise InvalidReferenceMeasure(field='R', index=index,
                                              reason=f'weight {weight} of atom "{atoms[index]}" must be > 0')

        total = float(weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidReferenceMeasure(field='R', reason=f'weights sum to {total!r}, not 1')

    @property
    def size(self) -> int:
        """Number of atoms."""
        return len(self.atoms)

    def expectation(self, values: np.ndarray) -> float:
        """E^R[values]."""
        return float(np.dot(self.weights, values))


@dataclass(frozen=True, eq=False)
class Density:
    """Radon-Nikodym derivative of a measure with respect to the reference measure."""

    values: np.ndarray

    def __post_init__(self):
        """Freeze the values."""
        object.__setattr__(self, 'values', _frozen(self.values, 'density'))

    @property
    def size(self) -> int:
        """Number of atoms the density is defined on."""
        return self.values.size


@dataclass(frozen=True, eq=False)
class HypothesisFamily:
    """A finite list of densities describing one side of the testing problem."""

    members: Tuple[Density, ...]
    side: Side
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        """Accept plain sequences of numbers as members."""
        members = tuple(member if isinstance(member, Density) else Density(member) for member in self.members)
        object.__setattr__(self, 'members', members)
        if self.labels is not None:
            object.__setattr__(self, 'labels', tuple(str(label) for label in self.labels))

    def __len__(self) -> int:
        """Number of members."""
        return len(self.members)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Members stacked as rows (members x atoms)."""
        if not self.members:
            return np.zeros((0, 0))
        stacked = np.vstack([member.values for member in self.members])
        stacked.setflags(write=False)
        return stacked

    def label(self, index: int) -> str:
        """Display name of a member."""
        if self.labels is not None:
            return self.labels[index]
        return f'{self.side.field}[{index}]'


@dataclass(frozen=True, eq=False)
class RandomizedTest:
    """Rejection probability per atom."""

    values: np.ndarray

    def __post_init__(self):
        """Freeze the values and check they lie in [0, 1]."""
        values = _frozen(self.values, 'phi')
        object.__setattr__(self, 'values', values)

        for index, value in enumerate(values):
            if not 0.0 <= value <= 1.0:
                raise InvalidTest(field='phi', index=index, reason=f'value {value} outside [0, 1]')

    @classmethod
    def constant(cls, value: float, size: int) -> 'RandomizedTest':
        """The test that rejects with the same probability everywhere."""
        return cls(np.full(size, float(value)))

    @classmethod
    def clipped(cls, values: Sequence[float]) -> 'RandomizedTest':
        """Build a test from solver output, removing round-off outside [0, 1]."""
        return cls(np.clip(np.asarray(values, dtype=float), 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class Prior:
    """Finite nonnegative measure over the members of the null family."""

    weights: np.ndarray

    def __post_init__(self):
        """Freeze the weights and check they are nonnegative and finite."""
        weights = _frozen(self.weights, 'lambda')
        object.__setattr__(self, 'weights', weights)

        for index, weight in enumerate(weights):
            if not np.isfinite(weight) or weight < 0.0:
                raise InvalidPrior(field='lambda', index=index, reason=f'weight {weight} must be finite and >= 0')

    @property
    def total_mass(self) -> float:
        """lambda(Z_P)."""
        return float(self.weights.sum())

    @classmethod
    def zero(cls, size: int) -> 'Prior':
        """The zero measure."""
        return cls(np.zeros(size))

    @classmethod
    def clipped(cls, values: Sequence[float]) -> 'Prior':
        """Build a prior from LP multipliers, removing negative round-off."""
        return cls(np.maximum(np.asarray(values, dtype=float), 0.0))


@dataclass(frozen=True, eq=False)
class TestingProblem:
    """Reference measure, both hypothesis families and the significance level(s)."""

    __test__ = False  # not a pytest class

    reference: ReferenceMeasure
    null_family: HypothesisFamily
    alt_family: HypothesisFamily
    alpha: Union[float, Tuple[float, ...]]
    generalized: bool = False
    validated: bool = field(default=False, compare=False)

    def __post_init__(self):
        """Freeze a per-member alpha into a tuple."""
        if not np.isscalar(self.alpha):
            object.__setattr__(self, 'alpha', tuple(float(level) for level in self.alpha))
        else:
            object.__setattr__(self, 'alpha', float(self.alpha))

    @property
    def atoms(self) -> Tuple[str, ...]:
        """Atom labels."""
        return self.reference.atoms

    @property
    def size(self) -> int:
        """Number of atoms."""
        return self.reference.size

    @cached_property
    def levels(self) -> np.ndarray:
        """One significance level per null member (a scalar alpha is broadcast)."""
        if isinstance(self.alpha, tuple):
            levels = np.array(self.alpha, dtype=float)
        else:
            levels = np.full(len(self.null_family), self.alpha)
        levels.setflags(write=False)
        return levels

    @property
    def scalar_alpha(self) -> Optional[float]:
        """The common level when every null member has the same level, else None."""
        levels = self.levels
        if levels.size and np.all(levels == levels[0]):
            return float(levels[0])
        return None

    @cached_property
    def null_weighted(self) -> np.ndarray:
        """R(w) * Z_P(w) for every null member (members x atoms)."""
        return self.null_family.matrix * self.reference.weights

    @cached_property
    def alt_weighted(self) -> np.ndarray:
        """R(w) * Z_Q(w) for every alternative member (members x atoms)."""
        return self.alt_family.matrix * self.reference.weights


@dataclass(frozen=True)
class FunctionalEvaluation:
    """Per-member expectations of a test and their worst case (max for size, min for power)."""

    per_member: np.ndarray
    value: float


@dataclass(frozen=True)
class Mixture:
    """Pointwise values of the prior mixture of the null densities."""

    values: np.ndarray
    total_mass: float
    normalized: Optional[np.ndarray]


def _check_level(level: float, index: Optional[int], generalized: bool) -> None:
    allowed = POSITIVE if generalized else OPEN_UNIT
    if not allowed.in_range(level) or not np.isfinite(level):
        raise AlphaOutOfRange(field='alpha', index=index, reason=f'level {level} not in {allowed.describe()}')


def _check_family(family: HypothesisFamily, reference: ReferenceMeasure, generalized: bool) -> None:
    name = family.side.field
    if len(family) == 0:
        raise EmptyFamily(field=name, reason='family has no members')

    if family.labels is not None and len(family.labels) != len(family):
        raise DimensionMismatch(field=f'labels.{name}',
                                reason=f'{len(family.labels)} labels for {len(family)} members')

    for index, member in enumerate(family.members):
        if member.size != reference.size:
            raise DimensionMismatch(field=name, index=index,
                                    reason=f'{member.size} values for {reference.size} atoms')

        bad = np.flatnonzero(~np.isfinite(member.values) | (member.values < 0.0))
        if bad.size:
            atom = reference.atoms[bad[0]]
            raise NegativeDensity(field=name, index=index,
                                  reason=f'value {member.values[bad[0]]} at atom "{atom}" must be finite and >= 0')

        if not generalized:
            mass = reference.expectation(member.values)
            if abs(mass - 1.0) > DENSITY_NORM_TOL:
                raise UnnormalizedDensity(field=name, index=index, reason=f'E^R[Z] = {mass!r}, not 1')

    matrix = family.matrix
    for index in range(1, len(family)):
        distances = np.max(np.abs(matrix[:index] - matrix[index]), axis=1)
        if np.any(distances <= DUPLICATE_TOL):
            first = int(np.flatnonzero(distances <= DUPLICATE_TOL)[0])
            raise DuplicateMember(field=name, index=index, reason=f'duplicates {name}[{first}]')


def _reordered_family(family: HypothesisFamily, order: np.ndarray, reference: ReferenceMeasure,
                      normalize: bool) -> HypothesisFamily:
    members = []
    for member in family.members:
        values = member.values[order]
        if normalize:
            values = values / float(np.dot(reference.weights, values))
        members.append(Density(values))
    return HypothesisFamily(members=tuple(members), side=family.side, labels=family.labels)


def validate_problem(problem: TestingProblem) -> TestingProblem:
    """Check every invariant of the problem and return its canonical form.

    The canonical form lists atoms in lexicographic label order and has every density renormalized
    exactly against the reference measure, so downstream sums are consistent.

    Raises:
        ProblemValidationError: One of its subclasses, naming the offending field and index.
    """
    reference = problem.reference
    null_count = len(problem.null_family)

    if isinstance(problem.alpha, tuple):
        if len(problem.alpha) != null_count:
            raise DimensionMismatch(field='alpha', reason=f'{len(problem.alpha)} levels for {null_count} null members')
        for index, level in enumerate(problem.alpha):
            _check_level(level, index, problem.generalized)
    else:
        _check_level(problem.alpha, None, problem.generalized)

    if problem.null_family.side is not Side.NULL or problem.alt_family.side is not Side.ALTERNATIVE:
        raise DimensionMismatch(field='families', reason='null and alternative families are swapped')

    _check_family(problem.null_family, reference, problem.generalized)
    _check_family(problem.alt_family, reference, problem.generalized)

    order = np.array(sorted(range(reference.size), key=lambda index: reference.atoms[index]), dtype=int)
    canonical_reference = ReferenceMeasure(atoms=tuple(reference.atoms[i] for i in order),
                                           weights=reference.weights[order])

    normalize = not problem.generalized
    validated = replace(
        problem,
        reference=canonical_reference,
        null_family=_reordered_family(problem.null_family, order, canonical_reference, normalize),
        alt_family=_reordered_family(problem.alt_family, order, canonical_reference, normalize),
        validated=True,
    )

    logger.debug(f'Validated problem: {reference.size} atoms, {null_count} null, '
                 f'{len(problem.alt_family)} alternative members')
    return validated


def ensure_valid(problem: TestingProblem) -> TestingProblem:
    """Validate the problem unless it already went through validate_problem."""
    if problem.validated:
        return problem
    return validate_problem(problem)


def _test_values(problem: TestingProblem, test: Union[RandomizedTest, np.ndarray]) -> np.ndarray:
    values = test.values if isinstance(test, RandomizedTest) else np.asarray(test, dtype=float)
    if values.shape != (problem.size,):
        raise DimensionMismatch(field='phi', reason=f'{values.size} values for {problem.size} atoms')
    return values


def evaluate_size(problem: TestingProblem, test: Union[RandomizedTest, np.ndarray]) -> FunctionalEvaluation:
    """E^R[phi Z_P] for every null member and their maximum."""
    per_member = problem.null_weighted @ _test_values(problem, test)
    return FunctionalEvaluation(per_member=per_member, value=float(per_member.max()))


def evaluate_power(problem: TestingProblem, test: Union[RandomizedTest, np.ndarray]) -> FunctionalEvaluation:
    """E^R[phi Z_Q] for every alternative member and their minimum."""
    per_member = problem.alt_weighted @ _test_values(problem, test)
    return FunctionalEvaluation(per_member=per_member, value=float(per_member.min()))


def mixture_density(null_family: HypothesisFamily, prior: Union[Prior, np.ndarray]) -> Mixture:
    """Pointwise sum_j lambda_j Z_{P_j}, plus the version normalized by the total mass.

    The normalized form is absent (None) when the prior is the zero measure.
    """
    weights = prior.weights if isinstance(prior, Prior) else np.asarray(prior, dtype=float)
    if weights.shape != (len(null_family),):
        raise DimensionMismatch(field='lambda', reason=f'{weights.size} weights for {len(null_family)} null members')

    values = weights @ null_family.matrix
    total_mass = float(weights.sum())
    normalized = values / total_mass if total_mass > 0.0 else None
    return Mixture(values=values, total_mass=total_mass, normalized=normalized)
