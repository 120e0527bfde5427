"""Sample means of Gaussian observations, binned into a finite testing problem.

With n observations from N(xi, sigma^2) the sample mean is N(xi, sigma^2 / n). The alternative is
the single pair (xi1, sigma1^2); the null is every (xi, sigma^2) on the grid, with sigma^2 on one
side of the boundary variance sigma0^2.
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from npdual.attribute import NpdualAttribute, VerifiedConfig
from npdual.attribute.exceptions import ConfigVerifyError
from npdual.families.exceptions import GridTooCoarse, SpecVerifyError
from npdual.logger.core import CoreLogger
from npdual.model import (HypothesisFamily, ReferenceMeasure, Side,
                          TestingProblem, validate_problem)
from npdual.utils.numbers import OPEN_UNIT, POSITIVE, NpdualRange

logger = CoreLogger(component='families')

# Largest probability one bin may carry for any member
MAX_BIN_PROBABILITY = 0.5


class GaussianSide(Enum):
    """Which side of sigma0^2 the null variances lie on."""

    UPPER = 'upper'
    LOWER = 'lower'


def _increasing(values: Any) -> Optional[str]:
    """Reason why values is not a strictly increasing list of finite numbers, or None."""
    try:
        array = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        return 'must be a list of numbers'
    if array.ndim != 1 or array.size == 0:
        return 'must be a non-empty list of numbers'
    if not np.all(np.isfinite(array)):
        return 'must be finite'
    if np.any(np.diff(array) <= 0.0):
        return 'must be strictly increasing'
    return None


class GaussianXbarSpec(VerifiedConfig):
    """Parameters of the binned sample-mean family."""

    error_class = SpecVerifyError

    n = NpdualAttribute(required=True, types=[int], number_range=NpdualRange(min=1, max=float('inf')),
                        help_text='Number of observations behind each sample mean')
    xi1 = NpdualAttribute(required=True, types=[int, float], help_text='Alternative mean')
    sigma1_sq = NpdualAttribute(required=True, types=[int, float], number_range=POSITIVE,
                                help_text='Alternative variance')
    sigma0_sq = NpdualAttribute(required=True, types=[int, float], number_range=POSITIVE,
                                help_text='Boundary variance of the null')
    xi_grid = NpdualAttribute(required=True, types=[list, tuple], help_text='Null means')
    sigma_sq_grid = NpdualAttribute(required=True, types=[list, tuple], help_text='Null variances')
    x_grid = NpdualAttribute(required=True, types=[list, tuple], help_text='Bin edges for the sample mean')
    side = NpdualAttribute(required=True, choices=list(GaussianSide),
                           help_text='upper: null variances >= sigma0^2, lower: <= sigma0^2')
    alpha = NpdualAttribute(default=0.1, types=[int, float], number_range=OPEN_UNIT, help_text='Significance level')

    def verify_extra(self, errors: ConfigVerifyError) -> None:
        """Grid shapes and the side of the null variances."""
        for name in ('xi_grid', 'sigma_sq_grid', 'x_grid'):
            value = getattr(self, name)
            if value is None:
                continue
            reason = _increasing(value)
            if reason:
                errors.add_attribute_error(name=name, error=reason)

        if self.x_grid is not None and len(self.x_grid) < 2:
            errors.add_attribute_error(name='x_grid', error='at least two bin edges are required')

        if self.sigma_sq_grid is None or _increasing(self.sigma_sq_grid) is not None:
            return
        variances = np.asarray(self.sigma_sq_grid, dtype=float)
        if np.any(variances <= 0.0):
            errors.add_attribute_error(name='sigma_sq_grid', error='variances must be > 0')

        if not isinstance(self.sigma0_sq, (int, float)) or not isinstance(self.side, GaussianSide):
            return
        if self.side is GaussianSide.UPPER and np.any(variances < self.sigma0_sq):
            errors.add_attribute_error(name='sigma_sq_grid',
                                       error=f'upper side needs every variance >= {self.sigma0_sq}')
        if self.side is GaussianSide.LOWER and np.any(variances > self.sigma0_sq):
            errors.add_attribute_error(name='sigma_sq_grid',
                                       error=f'lower side needs every variance <= {self.sigma0_sq}')

    @property
    def equal_variance(self) -> bool:
        """True when the alternative sits on the boundary variance."""
        return float(self.sigma0_sq) == float(self.sigma1_sq)


def gaussian_preset(case: int, refine: int = 1) -> GaussianXbarSpec:
    """The two built-in configurations.

    Case 1 tests null variances at or above 2 against variance 1; case 2 tests null variances at or
    below 1 against variance 2. refine multiplies the resolution of the mean grid and the bins.
    """
    if case not in (1, 2):
        raise ValueError(f'unknown preset case {case}')
    if refine < 1:
        raise ValueError(f'refine must be >= 1, got {refine}')

    common: Dict[str, Any] = dict(
        n=4,
        xi1=0.0,
        xi_grid=np.linspace(-2.0, 2.0, 20 * refine + 1).tolist(),
        x_grid=np.linspace(-4.0, 4.0, 81 * refine + 1).tolist(),
        alpha=0.1,
    )
    if case == 1:
        return GaussianXbarSpec(sigma1_sq=1.0, sigma0_sq=2.0, sigma_sq_grid=[2.0, 3.0, 4.0], side=GaussianSide.UPPER,
                                **common)
    return GaussianXbarSpec(sigma1_sq=2.0, sigma0_sq=1.0, sigma_sq_grid=[0.5, 0.75, 1.0], side=GaussianSide.LOWER,
                            **common)


def spec_from_dict(data: Dict[str, Any]) -> GaussianXbarSpec:
    """Build a spec from the `gaussian` object of a problem file.

    Either the GaussianXbarSpec field names, or {"case": 1|2, "refine": k} for a preset.
    """
    if not isinstance(data, dict):
        errors = SpecVerifyError(config_name=GaussianXbarSpec.__name__)
        errors.add_attribute_error(name='gaussian', error='expected an object')
        raise errors

    if 'case' in data:
        return gaussian_preset(int(data['case']), int(data.get('refine', 1)))

    values = dict(data)
    if 'side' in values:
        try:
            values['side'] = GaussianSide(values['side'])
        except ValueError:
            pass
    known = GaussianXbarSpec.attributes()
    unknown = [name for name in values if name not in known]
    if unknown:
        errors = SpecVerifyError(config_name=GaussianXbarSpec.__name__)
        for name in unknown:
            errors.add_attribute_error(name=name, error='unknown field')
        raise errors
    spec = GaussianXbarSpec(**values)
    spec.verify()
    return spec


def member_parameters(spec: GaussianXbarSpec) -> List[Tuple[float, float]]:
    """(xi, sigma^2) of every null member, in member order (variance-major)."""
    return [(float(xi), float(variance)) for variance in spec.sigma_sq_grid for xi in spec.xi_grid]


def bin_probabilities(edges: np.ndarray, mean: float, variance: float, n: int) -> np.ndarray:
    """Midpoint-rule probabilities of N(mean, variance / n) on the bins, renormalized to sum one."""
    midpoints = 0.5 * (edges[1:] + edges[:-1])
    widths = np.diff(edges)
    probabilities = norm.pdf(midpoints, loc=mean, scale=np.sqrt(variance / n)) * widths
    total = probabilities.sum()
    if total <= 0.0:
        raise GridTooCoarse(member=f'xi={mean:g},sigma_sq={variance:g}', bin_index=-1, probability=0.0)
    return probabilities / total


def _label(xi: float, variance: float) -> str:
    return f'xi={xi:g},sigma_sq={variance:g}'


def gaussian_xbar_problem(spec: GaussianXbarSpec, alpha: Optional[float] = None) -> TestingProblem:
    """Discretize the sample-mean family into a validated testing problem.

    The reference measure is the uniform mixture of every member's bin distribution; bins no member
    charges are dropped. Atoms are labelled binNNNN by their position on the x grid.

    Raises:
        SpecVerifyError: When the spec does not verify.
        GridTooCoarse: When any member puts more than half its probability into one bin.
    """
    spec.verify()
    level = spec.alpha if alpha is None else alpha
    edges = np.asarray(spec.x_grid, dtype=float)

    rows: List[np.ndarray] = []
    labels: List[str] = []
    for xi, variance in member_parameters(spec) + [(float(spec.xi1), float(spec.sigma1_sq))]:
        probabilities = bin_probabilities(edges, xi, variance, spec.n)
        worst = int(np.argmax(probabilities))
        if probabilities[worst] > MAX_BIN_PROBABILITY:
            raise GridTooCoarse(member=_label(xi, variance), bin_index=worst, probability=float(probabilities[worst]))
        rows.append(probabilities)
        labels.append(_label(xi, variance))

    matrix = np.vstack(rows)
    reference = matrix.mean(axis=0)
    keep = np.flatnonzero(reference > 0.0)
    if keep.size < reference.size:
        logger.warning(f'Dropping {reference.size - keep.size} bins that no member charges')

    weights = reference[keep] / reference[keep].sum()
    densities = matrix[:, keep] / weights

    problem = TestingProblem(
        reference=ReferenceMeasure(atoms=tuple(f'bin{index:04d}' for index in keep), weights=weights),
        null_family=HypothesisFamily(members=tuple(densities[:-1]), side=Side.NULL, labels=tuple(labels[:-1])),
        alt_family=HypothesisFamily(members=(densities[-1],), side=Side.ALTERNATIVE, labels=(labels[-1],)),
        alpha=level,
    )
    logger.debug(f'Gaussian family: {len(labels) - 1} null members on {keep.size} bins')
    return validate_problem(problem)


def xbar_distribution(problem: TestingProblem, density: np.ndarray) -> np.ndarray:
    """Bin probabilities of a density on a generated problem."""
    return problem.reference.weights * np.asarray(density, dtype=float)


def grid_weights(points: Sequence[float], mean: float, variance: float) -> np.ndarray:
    """N(mean, variance) density on points, normalized to sum one."""
    values = norm.pdf(np.asarray(points, dtype=float), loc=mean, scale=np.sqrt(variance))
    return values / values.sum()
