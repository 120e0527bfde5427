"""Tests for the optimality certificates."""
import numpy as np
import pytest

from npdual.certify import certify as certify_module
from npdual.certify import (check_saddle, check_slackness, check_weak_duality,
                            ck_certificate, decompose_structure)
from npdual.certify.exceptions import (CertificateInconsistency, NotCertified,
                                       ScalarAlphaRequired, SeedRequired)
from npdual.conftest import make_problem, random_problem
from npdual.npsolver import solve_maxmin

THIRD = 1.0 / 3.0


def _solved(problem):
    report = solve_maxmin(problem)
    return report.primal.test.values, report.dual.alt_weights, report.dual.prior.weights


def test_weak_duality_optimal_triple(instance_d1):
    """The optimal triple of D1 has a zero margin and three zero terms."""
    report = check_weak_duality(instance_d1, [0.0, THIRD, 1.0], [1.0], [1.0])
    assert abs(report.margin) <= 1e-12
    assert report.upper_term <= 1e-12
    assert report.lower_term <= 1e-12
    assert abs(report.size_term) <= 1e-12

def test_weak_duality_breakdown(instance_t1):
    """phi = 0.1 against identical hypotheses leaves 0.2 of unused level."""
    report = check_weak_duality(instance_t1, [0.1], [1.0], [1.0])
    assert report.margin == pytest.approx(0.2)
    assert report.size_term == pytest.approx(0.2)
    assert report.upper_term == 0.0
    assert report.lower_term == 0.0

def test_weak_duality_terms_sum(rng):
    """The three terms always add up to the margin."""
    for _ in range(100):
        problem = random_problem(rng)
        phi = rng.uniform(size=problem.size)
        q = rng.dirichlet(np.ones(len(problem.alt_family)))
        prior = rng.exponential(size=len(problem.null_family))
        try:
            report = check_weak_duality(problem, phi, q, prior)
        except CertificateInconsistency:
            pytest.fail('weak duality can not fail')
        total = report.upper_term + report.lower_term + report.size_term
        assert total == pytest.approx(report.margin, abs=1e-9)

def test_weak_duality_inconsistency(instance_d1, monkeypatch):
    """A size-feasible test beating the dual objective is flagged."""
    monkeypatch.setattr(certify_module, 'dual_objective', lambda *args: 0.0)
    with pytest.raises(CertificateInconsistency) as exc:
        check_weak_duality(instance_d1, [0.0, THIRD, 1.0], [1.0], [1.0])
    assert exc.value.margin == pytest.approx(-0.6)

def test_slackness_optimal_d1(instance_d1):
    """No violations for the optimal triple of D1 and the level is met exactly."""
    report = check_slackness(instance_d1, [0.0, THIRD, 1.0], [1.0], [1.0])
    assert report.upper_violation == 0.0
    assert report.lower_violation == 0.0
    assert report.binding_violation <= 1e-9
    assert report.boundary_mass == pytest.approx(THIRD)
    assert report.certified

def test_slackness_zero_prior(instance_t2):
    """A zero prior makes the binding condition vacuous."""
    report = check_slackness(instance_t2, [0.0, 1.0], [1.0], [0.0])
    assert report.binding_violation == 0.0
    assert report.upper_violation == 0.0
    assert report.lower_violation == 0.0
    assert report.certified

def test_slackness_reversed_test(instance_d1):
    """The mirror image of the optimal test rejects where it should accept."""
    report = check_slackness(instance_d1, [1.0, THIRD, 0.0], [1.0], [1.0])
    assert report.upper_violation == pytest.approx(THIRD)
    assert report.lower_violation == pytest.approx(THIRD)
    assert not report.certified

def test_acceptance_slackness_on_solver_output(rng):
    """Every solver output passes, and pushing phi up on an acceptance atom fails."""
    negative_controls = 0
    for _ in range(200):
        problem = random_problem(rng)
        phi, q, prior = _solved(problem)
        report = check_slackness(problem, phi, q, prior, tol=1e-7)
        assert report.certified

        excess = q @ problem.alt_family.matrix - prior @ problem.null_family.matrix
        lower = np.flatnonzero((excess < -1e-7 * (1.0 + prior @ problem.null_family.matrix))
                               & (problem.reference.weights > 1e-6))
        if lower.size:
            perturbed = phi.copy()
            perturbed[lower[0]] = min(1.0, perturbed[lower[0]] + 0.05)
            assert not check_slackness(problem, perturbed, q, prior, tol=1e-7).certified
            negative_controls += 1
    assert negative_controls > 0

def test_slackness_matches_margin(rng):
    """Slackness and a small margin agree on solver outputs and on size-feasible perturbations."""
    for _ in range(100):
        problem = random_problem(rng)
        phi, q, prior = _solved(problem)
        assert check_weak_duality(problem, phi, q, prior).margin <= 1e-7

        excess = q @ problem.alt_family.matrix - prior @ problem.null_family.matrix
        strength = problem.reference.weights * excess
        candidates = np.flatnonzero((phi > 0.99) & (strength * 0.05 > 1e-6) & (problem.reference.weights > 1e-6))
        if not candidates.size:
            continue
        lowered = phi.copy()
        lowered[candidates[0]] -= 0.05
        assert not check_slackness(problem, lowered, q, prior).certified
        assert check_weak_duality(problem, lowered, q, prior).margin > 1e-7

def test_saddle_requires_seed(instance_d1):
    """Sampling without a seed is refused."""
    with pytest.raises(SeedRequired):
        check_saddle(instance_d1, [0.0, THIRD, 1.0], [1.0], trials=10)

def test_saddle_without_trials(instance_d1):
    """With no samples only the exhaustive generator check runs."""
    report = check_saddle(instance_d1, [0.0, THIRD, 1.0], [1.0], trials=0)
    assert report.right_violation == 0.0
    assert report.passed

def test_saddle_identical_hypotheses(instance_t1):
    """No feasible test has more power than alpha against an identical alternative."""
    report = check_saddle(instance_t1, [0.3], [1.0], trials=500, seed=3)
    assert report.left_violation <= 1e-15

def test_saddle_two_alternatives(instance_two_alt):
    """The symmetric instance is a saddle point on both sides."""
    report = check_saddle(instance_two_alt, [0.25, 0.25], [0.5, 0.5], trials=1000, seed=11)
    assert report.left_violation <= 1e-8
    assert report.right_violation <= 1e-8

def test_acceptance_saddle_on_solver_output(rng):
    """A thousand seeded feasible tests never beat the solver's test against the mixed alternative."""
    for index in range(50):
        problem = random_problem(rng)
        phi, q, _ = _solved(problem)
        report = check_saddle(problem, phi, q, trials=1000, seed=index)
        assert report.left_violation <= 1e-8
        assert report.right_violation <= 1e-8
        assert report.passed

def test_saddle_is_seeded(rng):
    """Equal seeds give equal reports."""
    problem = random_problem(rng, atoms=8)
    phi, q, _ = _solved(problem)
    assert check_saddle(problem, phi, q, trials=200, seed=5) == check_saddle(problem, phi, q, trials=200, seed=5)

def test_decompose_d1(instance_d1):
    """D1 rejects on c, randomizes 1/3 on b and accepts on a."""
    decomposition = decompose_structure(instance_d1, [0.0, THIRD, 1.0], [1.0], [1.0])
    assert decomposition.upper == (2,)
    assert decomposition.boundary == (1,)
    assert decomposition.lower == (0,)
    np.testing.assert_allclose(decomposition.delta, [THIRD])

def test_decompose_disjoint(instance_t2):
    """With a zero prior the atom outside both supports sits on the boundary with delta 0."""
    decomposition = decompose_structure(instance_t2, [0.0, 1.0], [1.0], [0.0])
    assert decomposition.upper == (1,)
    assert decomposition.boundary == (0,)
    assert decomposition.lower == ()
    np.testing.assert_array_equal(decomposition.delta, [0.0])

def test_decompose_identical(instance_t1):
    """Identical hypotheses randomize everywhere at alpha."""
    decomposition = decompose_structure(instance_t1, [0.3], [1.0], [1.0])
    assert decomposition.boundary == (0,)
    np.testing.assert_allclose(decomposition.delta, [0.3])

def test_decompose_not_certified(instance_d1):
    """A non-optimal triple has no structure to report."""
    with pytest.raises(NotCertified):
        decompose_structure(instance_d1, [1.0, THIRD, 0.0], [1.0], [1.0])

def test_decompose_round_trip(rng):
    """Rebuilding from the partition reproduces the solver's test."""
    for _ in range(100):
        problem = random_problem(rng)
        phi, q, prior = _solved(problem)
        decomposition = decompose_structure(problem, phi, q, prior)
        covered = sorted(decomposition.upper + decomposition.lower + decomposition.boundary)
        assert covered == list(range(problem.size))
        np.testing.assert_allclose(decomposition.rebuild(problem.size), phi, atol=1e-9)

def test_ck_d1(instance_d1):
    """D1 has unit prior mass and the mixture is the null density itself."""
    certificate = ck_certificate(instance_d1, [0.0, THIRD, 1.0], [1.0], [1.0])
    assert certificate.z_hat == pytest.approx(1.0)
    np.testing.assert_allclose(certificate.w_hat, instance_d1.null_family.matrix[0])
    assert certificate.identity_residual <= 1e-9
    assert certificate.membership_residual <= 1e-12
    assert certificate.exhaustive

def test_ck_zero_prior(instance_t2):
    """A zero prior leaves only the excess term."""
    certificate = ck_certificate(instance_t2, [0.0, 1.0], [1.0], [0.0])
    assert certificate.z_hat == 0.0
    assert certificate.w_hat is None
    assert certificate.identity_residual <= 1e-15

def test_ck_identical(instance_t1):
    """Identical hypotheses: unit mass and the identity 0.3 = 0 + 0.3."""
    certificate = ck_certificate(instance_t1, [0.3], [1.0], [1.0])
    assert certificate.z_hat == pytest.approx(1.0)
    np.testing.assert_allclose(certificate.w_hat, [1.0])
    assert certificate.identity_residual <= 1e-15

def test_ck_requires_scalar_alpha():
    """Per-member levels are refused."""
    problem = make_problem([0.5, 0.5], [[2.0, 0.0], [0.0, 2.0]], [[1.0, 1.0]], (0.1, 0.3))
    with pytest.raises(ScalarAlphaRequired):
        ck_certificate(problem, [0.05, 0.15], [1.0], [0.0, 0.0])

def test_ck_not_certified(instance_d1):
    """The single-level certificate needs a certified triple."""
    with pytest.raises(NotCertified):
        ck_certificate(instance_d1, [1.0, THIRD, 0.0], [1.0], [1.0])

def test_ck_sampled_membership(rng):
    """Above twelve atoms membership is checked on seeded samples."""
    problem = random_problem(rng, atoms=16, null_count=3, alt_count=2)
    phi, q, prior = _solved(problem)
    certificate = ck_certificate(problem, phi, q, prior, seed=7)
    assert not certificate.exhaustive
    assert certificate.tests_checked >= 1
    assert 'sampled' in certificate.note

def test_acceptance_ck_identity(rng):
    """Every certified solve satisfies the single-level identity and sampled membership."""
    for _ in range(200):
        problem = random_problem(rng)
        phi, q, prior = _solved(problem)
        certificate = ck_certificate(problem, phi, q, prior)
        assert certificate.identity_residual <= 1e-7
        assert certificate.membership_residual <= 1e-8
