"""Certificates for a candidate triple (phi, q, lambda).

Every check works from the excess density Y = Z_Q - mix, where Z_Q = sum_j q_j Z_Qj is the mixed
alternative and mix = sum_i lambda_i Z_Pi the prior mixture of the null members. An optimal test
rejects where Y > 0, accepts where Y < 0, and meets its level on every member the prior charges.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from npdual.certify.exceptions import (CertificateInconsistency, NotCertified,
                                       ScalarAlphaRequired, SeedRequired)
from npdual.logger.core import CoreLogger
from npdual.model import (Prior, RandomizedTest, TestingProblem,
                          mixture_density)
from npdual.model.exceptions import DimensionMismatch
from npdual.npsolver import dual_objective
from npdual.utils.constants import (DEFAULT_TRIALS, EXHAUSTIVE_INDICATOR_ATOMS,
                                    FEAS_TOL, GRID_FEAS_TOL, INDICATOR_SAMPLES,
                                    SUPPORT_FLOOR, TOL_BOUNDARY, TOL_SLACK,
                                    TOL_WEAK_DUALITY)

logger = CoreLogger(component='certify')

PriorLike = Union[Prior, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class _Triple:
    phi: np.ndarray
    alt_weights: np.ndarray
    prior: np.ndarray
    alternative: np.ndarray
    mixture: np.ndarray

    @property
    def excess(self) -> np.ndarray:
        return self.alternative - self.mixture


def _triple(problem: TestingProblem, phi, alt_weights, prior: PriorLike) -> _Triple:
    values = phi.values if isinstance(phi, RandomizedTest) else RandomizedTest(phi).values
    if values.size != problem.size:
        raise DimensionMismatch(field='phi', reason=f'{values.size} values for {problem.size} atoms')

    prior_weights = prior.weights if isinstance(prior, Prior) else np.asarray(prior, dtype=float)
    # Validates both weight vectors
    dual_objective(problem, alt_weights, prior_weights)

    weights = np.asarray(alt_weights, dtype=float)
    return _Triple(
        phi=values,
        alt_weights=weights,
        prior=prior_weights,
        alternative=weights @ problem.alt_family.matrix,
        mixture=mixture_density(problem.null_family, prior_weights).values,
    )


def _sets(triple: _Triple, boundary_tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Masks of the upper, lower and boundary atoms."""
    excess = triple.excess
    boundary = np.abs(excess) <= boundary_tol * (1.0 + triple.mixture)
    return (excess > 0.0) & ~boundary, (excess < 0.0) & ~boundary, boundary


@dataclass(frozen=True)
class WeakDualityReport:
    """D(Q, lambda) - E^Q[phi] split into its three nonnegative parts.

    upper_term = E^R[(1 - phi) Y^+], lower_term = E^R[phi Y^-] and
    size_term = sum_i lambda_i (alpha_i - E^R[phi Z_Pi]); the last one is negative only when phi
    breaks a level the prior charges.
    """

    margin: float
    dual_value: float
    power: float
    upper_term: float
    lower_term: float
    size_term: float
    size_feasible: bool


def check_weak_duality(problem: TestingProblem, phi, alt_weights, prior: PriorLike) -> WeakDualityReport:
    """Margin of the dual objective over the power of phi against the mixed alternative.

    Raises:
        CertificateInconsistency: When phi meets every level and the margin is below -1e-8.
        DimensionMismatch: When a vector does not match the problem.
    """
    triple = _triple(problem, phi, alt_weights, prior)
    weights = problem.reference.weights
    excess = triple.excess

    power = float(weights @ (triple.phi * triple.alternative))
    dual_value = dual_objective(problem, triple.alt_weights, triple.prior)
    sizes = problem.null_weighted @ triple.phi

    report = WeakDualityReport(
        margin=dual_value - power,
        dual_value=dual_value,
        power=power,
        upper_term=float(weights @ ((1.0 - triple.phi) * np.maximum(excess, 0.0))),
        lower_term=float(weights @ (triple.phi * np.maximum(-excess, 0.0))),
        size_term=float(triple.prior @ (problem.levels - sizes)),
        size_feasible=bool(np.all(sizes <= problem.levels + FEAS_TOL)),
    )

    # Levels broken within FEAS_TOL may lower the margin by at most the prior-weighted excess
    deficit = float(triple.prior @ np.maximum(sizes - problem.levels, 0.0))
    if report.size_feasible and report.margin + deficit < -TOL_WEAK_DUALITY:
        raise CertificateInconsistency(margin=report.margin)
    return report


@dataclass(frozen=True)
class SlacknessReport:
    """Violations of the complementary slackness conditions, each one >= 0.

    upper_violation and lower_violation are reference masses of atoms where phi fails to reject
    (resp. accept); binding_violation is the worst |size - alpha_i| over members the prior charges.
    """

    upper_violation: float
    lower_violation: float
    binding_violation: float
    boundary_mass: float
    size_excess: float
    margin: float
    tol: float

    @property
    def certified(self) -> bool:
        """True when every condition holds within tol."""
        return max(self.upper_violation, self.lower_violation, self.binding_violation,
                   self.size_excess, self.margin) <= self.tol


def check_slackness(problem: TestingProblem, phi, alt_weights, prior: PriorLike, tol: float = TOL_SLACK,
                    boundary_tol: float = TOL_BOUNDARY) -> SlacknessReport:
    """Check phi = 1 above the prior mixture, phi = 0 below it, and size alpha_i where lambda_i > 0.

    An atom is on the boundary when |Y| <= boundary_tol * (1 + mix). A member counts as charged
    when lambda_i exceeds 1e-9 of the prior's total mass.
    """
    triple = _triple(problem, phi, alt_weights, prior)
    weights = problem.reference.weights
    upper, lower, boundary = _sets(triple, boundary_tol)

    sizes = problem.null_weighted @ triple.phi
    total = float(triple.prior.sum())
    charged = triple.prior > SUPPORT_FLOOR * total if total > 0.0 else np.zeros(triple.prior.size, dtype=bool)
    binding = float(np.max(np.abs(sizes[charged] - problem.levels[charged]))) if charged.any() else 0.0

    weak = check_weak_duality(problem, triple.phi, triple.alt_weights, triple.prior)
    report = SlacknessReport(
        upper_violation=float(weights[upper & (triple.phi < 1.0 - tol)].sum()),
        lower_violation=float(weights[lower & (triple.phi > tol)].sum()),
        binding_violation=binding,
        boundary_mass=float(weights[boundary].sum()),
        size_excess=max(0.0, float(np.max(sizes - problem.levels))),
        margin=max(0.0, weak.margin),
        tol=tol,
    )
    logger.debug(f'Slackness: upper={report.upper_violation:.3e} lower={report.lower_violation:.3e} '
                 f'binding={report.binding_violation:.3e} margin={report.margin:.3e}')
    return report


@dataclass(frozen=True)
class SaddleReport:
    """Worst improvements found against the pair (phi~, Q~).

    left_violation: best sampled feasible test's power against Q~ minus that of phi~.
    right_violation: power of phi~ against Q~ minus its power against the weakest generator.
    """

    trials: int
    seed: Optional[int]
    left_violation: float
    right_violation: float
    tol: float

    @property
    def passed(self) -> bool:
        """True when neither side improves by more than tol."""
        return self.left_violation <= self.tol and self.right_violation <= self.tol


def _into_level_set(problem: TestingProblem, tests: np.ndarray) -> np.ndarray:
    """Scale every row down just enough to meet all levels."""
    sizes = tests @ problem.null_weighted.T
    with np.errstate(divide='ignore'):
        ratios = np.where(sizes > 0.0, problem.levels / sizes, np.inf)
    return tests * np.minimum(1.0, ratios.min(axis=1))[:, None]


def check_saddle(problem: TestingProblem, phi, alt_weights, trials: int = DEFAULT_TRIALS,
                 seed: Optional[int] = None, tol: float = TOL_SLACK) -> SaddleReport:
    """Search for a test beating phi~ against Q~, and for a generator doing worse than Q~ against phi~.

    Half of the sampled tests are random indicator vertices, the other half random boxes; samples
    breaking a level are scaled back into the level set. The right check is exhaustive over the
    generators, which suffices by linearity over their hull.

    Raises:
        SeedRequired: When trials > 0 and no seed is given.
    """
    if trials > 0 and seed is None:
        raise SeedRequired('randomized saddle checks need a seed')

    values = phi.values if isinstance(phi, RandomizedTest) else RandomizedTest(phi).values
    weights = np.asarray(alt_weights, dtype=float)
    dual_objective(problem, weights, Prior.zero(len(problem.null_family)))

    mixed = weights @ problem.alt_weighted
    reference_power = float(mixed @ values)

    left = 0.0
    if trials > 0:
        rng = np.random.default_rng(seed)
        vertices = trials // 2
        thresholds = rng.uniform(size=(vertices, 1))
        indicators = (rng.uniform(size=(vertices, problem.size)) < thresholds).astype(float)
        boxes = rng.uniform(size=(trials - vertices, problem.size))
        samples = _into_level_set(problem, np.vstack([indicators, boxes]))
        left = float(np.max(samples @ mixed)) - reference_power

    right = reference_power - float(np.min(problem.alt_weighted @ values))

    report = SaddleReport(trials=trials, seed=seed, left_violation=left, right_violation=right, tol=tol)
    logger.debug(f'Saddle check over {trials} samples: left={left:.3e} right={right:.3e}')
    return report


@dataclass(frozen=True)
class StructureDecomposition:
    """Partition of the atoms by the sign of Y, with the randomization of phi~ on the boundary."""

    upper: Tuple[int, ...]
    lower: Tuple[int, ...]
    boundary: Tuple[int, ...]
    delta: np.ndarray = field(compare=False)

    def rebuild(self, size: int) -> np.ndarray:
        """The 0-1 test with randomization delta on the boundary."""
        values = np.zeros(size)
        values[list(self.upper)] = 1.0
        values[list(self.boundary)] = self.delta
        return values


def decompose_structure(problem: TestingProblem, phi, alt_weights, prior: PriorLike, tol: float = TOL_SLACK,
                        boundary_tol: float = TOL_BOUNDARY) -> StructureDecomposition:
    """Split the atoms into rejection, acceptance and randomization sets.

    Raises:
        NotCertified: When the triple fails check_slackness, or the 0-1 form does not reproduce phi.
    """
    slackness = check_slackness(problem, phi, alt_weights, prior, tol=tol, boundary_tol=boundary_tol)
    if not slackness.certified:
        raise NotCertified(reason='complementary slackness fails')

    triple = _triple(problem, phi, alt_weights, prior)
    upper, lower, boundary = _sets(triple, boundary_tol)
    decomposition = StructureDecomposition(
        upper=tuple(int(index) for index in np.flatnonzero(upper)),
        lower=tuple(int(index) for index in np.flatnonzero(lower)),
        boundary=tuple(int(index) for index in np.flatnonzero(boundary)),
        delta=triple.phi[boundary].copy(),
    )

    deviation = float(np.max(np.abs(decomposition.rebuild(problem.size) - triple.phi)))
    if deviation > tol:
        raise NotCertified(reason=f'0-1 form differs from phi by {deviation:.3e}')
    return decomposition


@dataclass(frozen=True)
class CkCertificate:
    """Prior mass z_hat and normalized mixture w_hat with the single-level identity they satisfy.

    membership_residual is the largest E^R[phi w_hat] - alpha over the tests actually checked; it
    is evidence for, not a proof of, w_hat lying in the enlarged null.
    """

    z_hat: float
    w_hat: Optional[np.ndarray]
    identity_residual: float
    membership_residual: float
    tests_checked: int
    exhaustive: bool
    note: str


def _indicator_tests(problem: TestingProblem, seed: int) -> Tuple[np.ndarray, bool]:
    if problem.size <= EXHAUSTIVE_INDICATOR_ATOMS:
        return np.array(list(product((0.0, 1.0), repeat=problem.size))), True
    rng = np.random.default_rng(seed)
    return (rng.uniform(size=(INDICATOR_SAMPLES, problem.size)) < 0.5).astype(float), False


def ck_certificate(problem: TestingProblem, phi, alt_weights, prior: PriorLike, tol: float = TOL_SLACK,
                   seed: int = 0) -> CkCertificate:
    """Rewrite the optimal prior as z_hat * w_hat and check the single-level identity.

    E^Q[phi~] = E^R[(Z_Q - z_hat w_hat)^+] + alpha z_hat must hold. Membership of w_hat in the
    enlarged null is checked on every size-feasible indicator test when there are at most 12 atoms,
    otherwise on 4096 seeded random indicators, and always on phi~ itself.

    Raises:
        ScalarAlphaRequired: When the members have different levels.
        NotCertified: When the triple fails check_slackness.
    """
    alpha = problem.scalar_alpha
    if alpha is None:
        raise ScalarAlphaRequired('the single-level certificate needs one alpha for every null member')

    slackness = check_slackness(problem, phi, alt_weights, prior, tol=tol)
    if not slackness.certified:
        raise NotCertified(reason='complementary slackness fails')

    triple = _triple(problem, phi, alt_weights, prior)
    weights = problem.reference.weights
    z_hat = float(triple.prior.sum())

    power = float(weights @ (triple.phi * triple.alternative))
    identity = float(weights @ np.maximum(triple.alternative - triple.mixture, 0.0)) + alpha * z_hat
    identity_residual = abs(power - identity)

    if z_hat <= 0.0:
        return CkCertificate(z_hat=0.0, w_hat=None, identity_residual=identity_residual, membership_residual=-alpha,
                             tests_checked=0, exhaustive=True,
                             note='zero prior: the mixture vanishes and membership holds trivially')

    w_hat = triple.mixture / z_hat
    indicators, exhaustive = _indicator_tests(problem, seed)
    feasible = np.all(indicators @ problem.null_weighted.T <= problem.levels + GRID_FEAS_TOL, axis=1)
    tests = np.vstack([indicators[feasible], triple.phi])
    membership = float(np.max(tests @ (weights * w_hat))) - alpha

    how = 'every size-feasible indicator test' if exhaustive else f'{INDICATOR_SAMPLES} sampled indicator tests'
    certificate = CkCertificate(
        z_hat=z_hat,
        w_hat=w_hat,
        identity_residual=identity_residual,
        membership_residual=membership,
        tests_checked=int(tests.shape[0]),
        exhaustive=exhaustive,
        note=f'membership of w_hat checked on {how} and the optimal test only',
    )
    logger.debug(f'Single-level certificate: z_hat={z_hat:.10g} identity residual={identity_residual:.3e}')
    return certificate
