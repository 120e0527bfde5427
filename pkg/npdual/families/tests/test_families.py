"""Tests for the Gaussian sample-mean family and its least favorable prior."""
import numpy as np
import pytest

from npdual.certify import check_slackness
from npdual.families import (GaussianSide, GaussianXbarSpec, check_lfp,
                             gaussian_preset, gaussian_xbar_problem,
                             lfp_report, member_parameters, spec_from_dict)
from npdual.families.exceptions import GridTooCoarse, NotSolved, SpecVerifyError
from npdual.model import TestingProblem
from npdual.npsolver import solve_maxmin


def _spec(**overrides) -> GaussianXbarSpec:
    values = dict(n=4, xi1=0.0, sigma1_sq=1.0, sigma0_sq=2.0, xi_grid=[-1.0, -0.5, 0.0, 0.5, 1.0],
                  sigma_sq_grid=[2.0, 3.0], x_grid=np.linspace(-4.0, 4.0, 41).tolist(), side=GaussianSide.UPPER,
                  alpha=0.1)
    values.update(overrides)
    return GaussianXbarSpec(**values)


def _solved(spec):
    problem = gaussian_xbar_problem(spec)
    report = solve_maxmin(problem)
    return problem, report, lfp_report(problem, spec, report)


def test_member_order():
    """Members run over the means for each variance in turn."""
    spec = _spec(xi_grid=[-1.0, 1.0], sigma_sq_grid=[2.0, 3.0])
    assert member_parameters(spec) == [(-1.0, 2.0), (1.0, 2.0), (-1.0, 3.0), (1.0, 3.0)]

def test_problem_shape():
    """The case-1 preset has one atom per bin and one null member per grid pair."""
    spec = gaussian_preset(1)
    problem = gaussian_xbar_problem(spec)
    assert isinstance(problem, TestingProblem)
    assert problem.validated
    assert problem.size == 81
    assert len(problem.null_family) == 63
    assert len(problem.alt_family) == 1
    assert problem.atoms[0] == 'bin0000'
    assert problem.null_family.label(0) == 'xi=-2,sigma_sq=2'
    assert problem.alt_family.label(0) == 'xi=0,sigma_sq=1'
    assert problem.reference.weights.sum() == pytest.approx(1.0)

def test_bin_probabilities_match_members():
    """R times a member density recovers its normalized bin probabilities."""
    spec = _spec()
    problem = gaussian_xbar_problem(spec)
    probabilities = problem.reference.weights * problem.null_family.matrix
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0)
    # Equal-variance members are shifted copies, so the centered one is symmetric
    centered = probabilities[2]
    np.testing.assert_allclose(centered, centered[::-1], atol=1e-12)

def test_alpha_override():
    """An explicit level replaces the one in the spec."""
    problem = gaussian_xbar_problem(_spec(), alpha=0.25)
    assert problem.scalar_alpha == 0.25

def test_identical_hypotheses():
    """A null made of the alternative alone is solved at value alpha."""
    spec = _spec(xi_grid=[0.0], sigma_sq_grid=[1.0], sigma0_sq=1.0)
    report = solve_maxmin(gaussian_xbar_problem(spec))
    assert report.lower_value == pytest.approx(0.1, abs=1e-8)

def test_grid_too_coarse():
    """One wide bin around the mean is refused."""
    spec = _spec(x_grid=[-4.0, -3.0, 3.0, 4.0])
    with pytest.raises(GridTooCoarse) as exc:
        gaussian_xbar_problem(spec)
    assert exc.value.bin_index == 1
    assert exc.value.probability > 0.5
    assert 'refine' in str(exc.value)

def test_family_verify_errors():
    """Every broken field is reported at once."""
    spec = _spec(xi_grid=[1.0, 0.0], sigma_sq_grid=[1.0, 3.0], x_grid=[0.0], n=0)
    with pytest.raises(SpecVerifyError) as exc:
        gaussian_xbar_problem(spec)
    errors = exc.value.attribute_errors
    assert 'xi_grid' in errors
    assert 'x_grid' in errors
    assert 'n' in errors
    assert any('upper side' in error for error in errors['sigma_sq_grid'])

def test_lower_side_verify():
    """Lower-side variances may not exceed the boundary."""
    spec = _spec(side=GaussianSide.LOWER, sigma1_sq=2.0, sigma0_sq=1.0, sigma_sq_grid=[0.5, 1.5])
    with pytest.raises(SpecVerifyError) as exc:
        spec.verify()
    assert 'sigma_sq_grid' in exc.value.attribute_errors

def test_family_from_dict():
    """Field names map onto the spec and the side is read from its value."""
    spec = spec_from_dict({'n': 4, 'xi1': 0.0, 'sigma1_sq': 1.0, 'sigma0_sq': 2.0, 'xi_grid': [0.0, 1.0],
                           'sigma_sq_grid': [2.0], 'x_grid': [-1.0, 0.0, 1.0], 'side': 'upper'})
    assert spec.side is GaussianSide.UPPER
    assert spec.alpha == 0.1

def test_family_from_dict_preset():
    """A case key selects a preset."""
    spec = spec_from_dict({'case': 2, 'refine': 2})
    assert spec.side is GaussianSide.LOWER
    assert len(spec.xi_grid) == 41
    assert len(spec.x_grid) == 163

def test_family_from_dict_errors():
    """Unknown fields and a bad side are verification errors."""
    with pytest.raises(SpecVerifyError) as exc:
        spec_from_dict({'n': 4, 'mean': 0.0})
    assert 'mean' in exc.value.attribute_errors
    with pytest.raises(SpecVerifyError) as exc:
        spec_from_dict({'n': 4, 'xi1': 0.0, 'sigma1_sq': 1.0, 'sigma0_sq': 2.0, 'xi_grid': [0.0],
                        'sigma_sq_grid': [2.0], 'x_grid': [-1.0, 0.0, 1.0], 'side': 'sideways'})
    assert 'side' in exc.value.attribute_errors

def test_preset_arguments():
    """Only the two cases exist and refinement starts at one."""
    with pytest.raises(ValueError):
        gaussian_preset(3)
    with pytest.raises(ValueError):
        gaussian_preset(1, refine=0)

def test_acceptance_upper_case():
    """Testing variance 1 against variances from 2 up: the prior sits on sigma^2 = 2 at xi = 0."""
    spec = gaussian_preset(1)
    _, report, lfp = _solved(spec)
    assert report.gap <= 1e-7
    assert lfp.prior_mass_at_boundary_sigma >= 0.9
    assert lfp.prior_mode_xi == pytest.approx(0.0, abs=1e-12)
    assert lfp.xi_marginal_distance is None
    assert lfp.truncation_edge_mass <= 1e-6
    passed, _ = check_lfp(lfp, spec)
    assert passed

def test_acceptance_lower_case():
    """Testing variance 2 against variances up to 1: the mixture reproduces the alternative's law."""
    spec = gaussian_preset(2)
    _, report, lfp = _solved(spec)
    assert report.gap <= 1e-7
    assert lfp.xbar_density_distance <= 0.02
    assert lfp.xi_marginal_distance is not None
    passed, reason = check_lfp(lfp, spec)
    assert passed, reason

    refined_spec = gaussian_preset(2, refine=2)
    _, _, refined = _solved(refined_spec)
    assert refined.xbar_density_distance <= max(lfp.xbar_density_distance, 1e-6)
    passed, reason = check_lfp(refined, refined_spec)
    assert passed, reason

def test_acceptance_lower_case_moments():
    """Whichever least favorable prior is found, its sample-mean law has the alternative's mean and variance."""
    for refine in (1, 2):
        _, _, lfp = _solved(gaussian_preset(2, refine=refine))
        assert lfp.xi_mean_error <= 0.01
        assert lfp.xbar_variance_error <= 0.01
        assert np.sum(lfp.xi_marginal) == pytest.approx(1.0)

def test_acceptance_presets_certified():
    """Solver output on every preset is feasible, certified and keeps the value chain."""
    for case, refine in ((1, 1), (2, 1), (2, 2)):
        problem, report, _ = _solved(gaussian_preset(case, refine=refine))
        slackness = check_slackness(problem, report.primal.test.values, report.dual.alt_weights,
                                    report.dual.prior.weights)
        assert slackness.certified, (case, refine, slackness)
        assert report.chain_holds(1e-8), (case, refine)
        assert np.all(report.primal.sizes <= problem.levels + 1e-8), (case, refine)
        assert report.lp_residual <= 1e-8, (case, refine)
        assert report.gap <= 1e-7, (case, refine)

def test_single_null_member():
    """With one null member the whole prior is on it."""
    spec = _spec(xi_grid=[0.0], sigma_sq_grid=[2.0])
    _, report, lfp = _solved(spec)
    assert report.dual.prior.total_mass > 0.0
    assert lfp.prior_mass_at_boundary_sigma == pytest.approx(1.0)
    assert lfp.truncation_edge_mass == 0.0
    np.testing.assert_allclose(lfp.xi_marginal, [1.0])

def test_equal_variance():
    """An alternative on the boundary variance is a null member, so the check only notes it."""
    spec = _spec(sigma1_sq=2.0)
    _, report, lfp = _solved(spec)
    assert lfp.equal_variance
    assert report.lower_value == pytest.approx(0.1, abs=1e-7)
    passed, reason = check_lfp(lfp, spec)
    assert passed
    assert 'boundary variance' in reason

def test_not_solved():
    """The report needs a solve of the same problem."""
    spec = _spec()
    problem = gaussian_xbar_problem(spec)
    with pytest.raises(NotSolved):
        lfp_report(problem, spec, None)

    other = _spec(xi_grid=[0.0])
    report = solve_maxmin(gaussian_xbar_problem(other))
    with pytest.raises(NotSolved):
        lfp_report(problem, spec, report)

def test_refinement_settles():
    """Doubling the bin count changes the solved value by no more than twice the previous change."""
    values = []
    for bins in (40, 80, 160):
        spec = _spec(x_grid=np.linspace(-4.0, 4.0, bins + 1).tolist())
        values.append(solve_maxmin(gaussian_xbar_problem(spec)).lower_value)
    first, second = abs(values[1] - values[0]), abs(values[2] - values[1])
    assert second <= 2.0 * first + 1e-6
