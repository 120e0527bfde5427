"""Shape of the least favorable prior found for a Gaussian sample-mean problem."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from npdual.families.exceptions import NotSolved
from npdual.families.gaussian import (GaussianSide, GaussianXbarSpec,
                                      grid_weights, member_parameters,
                                      xbar_distribution)
from npdual.logger.core import CoreLogger
from npdual.model import TestingProblem, mixture_density
from npdual.npsolver import SolveReport
from npdual.utils.constants import (LFP_BOUNDARY_MASS, LFP_DISTANCE_TOL,
                                    TRUNCATION_EDGE_TOL)

logger = CoreLogger(component='families')


@dataclass(frozen=True, eq=False)
class LfpReport:
    """Where the least favorable prior puts its mass.

    Fractions are of the total prior mass and are all 0 for the zero prior. The xi fields are only
    computed for the lower side with sigma1^2 > sigma0^2. There every variance v on the grid admits a
    mixing law N(xi1, (sigma1^2 - v) / n) reproducing the alternative, so the least favorable prior is
    not unique and the solver returns one sparse vertex among many. xi_marginal_distance, against the
    mixing law on the boundary variance, is therefore evidence only. What every least favorable prior
    shares are the first two moments of the sample mean: xi_mean_error is |E[xi] - xi1| and
    xbar_variance_error is |Var[xi] + E[sigma^2] / n - sigma1^2 / n| under the normalized prior.
    """

    side: GaussianSide
    prior_mass_at_boundary_sigma: float
    prior_mode_xi: float
    xbar_density_distance: float
    xi_marginal: np.ndarray
    xi_marginal_distance: Optional[float]
    xi_mean_error: Optional[float]
    xbar_variance_error: Optional[float]
    truncation_edge_mass: float
    equal_variance: bool
    lower_value: float
    dual_value: float


def lfp_report(problem: TestingProblem, spec: GaussianXbarSpec, solve_report: Optional[SolveReport]) -> LfpReport:
    """Aggregate the solved prior by (xi, sigma^2) and compare its sample-mean law with the alternative's.

    Raises:
        NotSolved: When there is no report, or it does not belong to a problem built from spec.
    """
    parameters = member_parameters(spec)
    if solve_report is None:
        raise NotSolved('solve the problem before asking for its least favorable prior')
    weights = solve_report.dual.prior.weights
    if weights.size != len(parameters) or len(problem.null_family) != len(parameters):
        raise NotSolved(f'prior has {weights.size} weights, the spec lists {len(parameters)} null members')

    xis = np.asarray(spec.xi_grid, dtype=float)
    variances = np.asarray(spec.sigma_sq_grid, dtype=float)
    # Member order is variance-major, so rows are variances and columns means
    grid = weights.reshape(variances.size, xis.size)
    total = float(weights.sum())
    fractions = grid / total if total > 0.0 else np.zeros_like(grid)

    boundary = np.isclose(variances, float(spec.sigma0_sq))
    xi_marginal = fractions.sum(axis=0)
    mode = float(xis[int(np.argmax(xi_marginal))])

    edge_mass = 0.0
    if variances.size > 1:
        far = -1 if spec.side is GaussianSide.UPPER else 0
        edge_mass = float(fractions[far].sum())

    alt = xbar_distribution(problem, problem.alt_family.matrix[0])
    mixture = mixture_density(problem.null_family, weights)
    if mixture.normalized is None:
        distance = float(np.max(alt))
    else:
        distance = float(np.max(np.abs(xbar_distribution(problem, mixture.normalized) - alt)))

    marginal_distance: Optional[float] = None
    mean_error: Optional[float] = None
    variance_error: Optional[float] = None
    spread = float(spec.sigma1_sq) - float(spec.sigma0_sq)
    if spec.side is GaussianSide.LOWER and spread > 0.0:
        target = grid_weights(xis, float(spec.xi1), spread / spec.n)
        marginal_distance = float(np.max(np.abs(xi_marginal - target)))
        if total > 0.0:
            mean = float(xi_marginal @ xis)
            implied = float(xi_marginal @ (xis - mean) ** 2) + float(fractions.sum(axis=1) @ variances) / spec.n
            mean_error = abs(mean - float(spec.xi1))
            variance_error = abs(implied - float(spec.sigma1_sq) / spec.n)

    report = LfpReport(
        side=spec.side,
        prior_mass_at_boundary_sigma=float(fractions[boundary].sum()),
        prior_mode_xi=mode,
        xbar_density_distance=distance,
        xi_marginal=xi_marginal,
        xi_marginal_distance=marginal_distance,
        xi_mean_error=mean_error,
        xbar_variance_error=variance_error,
        truncation_edge_mass=edge_mass,
        equal_variance=spec.equal_variance,
        lower_value=solve_report.lower_value,
        dual_value=solve_report.dual_value,
    )
    logger.debug(f'Prior mass {total:.6g}, boundary fraction {report.prior_mass_at_boundary_sigma:.6g}, '
                 f'sample-mean distance {distance:.3g}')
    return report


def _nearest(values: np.ndarray, target: float) -> float:
    return float(values[int(np.argmin(np.abs(values - target)))])


def check_lfp(report: LfpReport, spec: GaussianXbarSpec) -> Tuple[bool, str]:
    """The structural check for the side of the spec.

    Upper side: the prior sits on the boundary variance, with its mode at the grid mean nearest
    xi1. Lower side: its mixture reproduces the alternative's sample-mean law.
    """
    if report.equal_variance:
        return True, 'alternative variance equals the boundary variance; both families share that member'

    if report.truncation_edge_mass > TRUNCATION_EDGE_TOL:
        logger.warning(f'Prior puts {report.truncation_edge_mass:.3g} of its mass on the edge of the variance grid')

    if spec.side is GaussianSide.UPPER:
        expected = _nearest(np.asarray(spec.xi_grid, dtype=float), float(spec.xi1))
        if report.prior_mass_at_boundary_sigma < LFP_BOUNDARY_MASS:
            return False, (f'boundary variance carries {report.prior_mass_at_boundary_sigma:.4f} of the prior, '
                           f'below {LFP_BOUNDARY_MASS}')
        if report.prior_mode_xi != expected:
            return False, f'prior mode at xi={report.prior_mode_xi:g}, expected xi={expected:g}'
        return True, f'prior concentrated on sigma_sq={spec.sigma0_sq:g} around xi={expected:g}'

    if report.xbar_density_distance > LFP_DISTANCE_TOL:
        return False, (f'mixture sample-mean law is {report.xbar_density_distance:.4f} from the alternative, '
                       f'above {LFP_DISTANCE_TOL}')
    for name, error in (('mean', report.xi_mean_error), ('variance', report.xbar_variance_error)):
        if error is not None and error > LFP_DISTANCE_TOL:
            return False, f'mixture sample-mean {name} is {error:.4f} from the alternative, above {LFP_DISTANCE_TOL}'
    return True, f'mixture sample-mean law within {report.xbar_density_distance:.4f} of the alternative'
