"""Machine-readable report payloads and the CSV plot data."""
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from npdual.certify import (CkCertificate, SaddleReport, SlacknessReport,
                            StructureDecomposition, WeakDualityReport)
from npdual.families import GaussianXbarSpec, LfpReport, member_parameters
from npdual.model import TestingProblem
from npdual.npsolver import SolveReport, scan_dual_ray
from npdual.utils.constants import DUAL_RAY_FILE, TEST_FILE
from npdual.utils.output import write_csv

# Scales of the least favorable prior sampled for dual_ray.csv
RAY_SCALES = np.linspace(0.0, 2.0, 41)


def _by_atom(problem: TestingProblem, values: np.ndarray) -> Dict[str, float]:
    return {atom: float(value) for atom, value in zip(problem.atoms, values)}


def _atoms(problem: TestingProblem, indices) -> List[str]:
    return [problem.atoms[index] for index in indices]


def problem_payload(problem: TestingProblem) -> Dict[str, Any]:
    """Sizes and levels of the problem."""
    return {
        'atoms': problem.size,
        'null_members': len(problem.null_family),
        'alt_members': len(problem.alt_family),
        'alpha': problem.levels.tolist() if problem.scalar_alpha is None else problem.scalar_alpha,
        'generalized': problem.generalized,
    }


def solve_payload(problem: TestingProblem, report: SolveReport) -> Dict[str, Any]:
    """The three values, the gap and the optimal triple."""
    return {
        'lower_value': report.lower_value,
        'middle_value': report.middle_value,
        'dual_value': report.dual_value,
        'gap': report.gap,
        'upper_mass': report.upper_mass,
        'iterations': report.iterations,
        'lp_residual': report.lp_residual,
        'test': _by_atom(problem, report.primal.test.values),
        'sizes': report.primal.sizes,
        'powers': report.primal.powers,
        'alt_weights': report.dual.alt_weights,
        'prior': report.dual.prior.weights,
    }


def slackness_payload(report: SlacknessReport) -> Dict[str, Any]:
    """Complementary slackness violations."""
    return {
        'upper_violation': report.upper_violation,
        'lower_violation': report.lower_violation,
        'binding_violation': report.binding_violation,
        'boundary_mass': report.boundary_mass,
        'size_excess': report.size_excess,
        'margin': report.margin,
        'tol': report.tol,
        'certified': report.certified,
    }


def weak_duality_payload(report: WeakDualityReport) -> Dict[str, Any]:
    """Margin between the dual objective and the power of the test."""
    return {
        'margin': report.margin,
        'dual_value': report.dual_value,
        'power': report.power,
        'upper_term': report.upper_term,
        'lower_term': report.lower_term,
        'size_term': report.size_term,
        'size_feasible': report.size_feasible,
    }


def ck_payload(certificate: Optional[CkCertificate], reason: str = '') -> Optional[Dict[str, Any]]:
    """The single-level certificate, or the reason it was not computed."""
    if certificate is None:
        return {'skipped': reason}
    return {
        'z_hat': certificate.z_hat,
        'w_hat': certificate.w_hat,
        'identity_residual': certificate.identity_residual,
        'membership_residual': certificate.membership_residual,
        'tests_checked': certificate.tests_checked,
        'exhaustive': certificate.exhaustive,
        'note': certificate.note,
    }


def structure_payload(problem: TestingProblem, decomposition: Optional[StructureDecomposition],
                      reason: str = '') -> Dict[str, Any]:
    """Atom labels of the rejection, acceptance and randomization sets."""
    if decomposition is None:
        return {'skipped': reason}
    return {
        'upper': _atoms(problem, decomposition.upper),
        'lower': _atoms(problem, decomposition.lower),
        'boundary': _atoms(problem, decomposition.boundary),
        'delta': dict(zip(_atoms(problem, decomposition.boundary), decomposition.delta.tolist())),
    }


def saddle_payload(report: SaddleReport) -> Dict[str, Any]:
    """Sampled improvements on either side of the saddle point."""
    return {
        'trials': report.trials,
        'seed': report.seed,
        'left_violation': report.left_violation,
        'right_violation': report.right_violation,
        'tol': report.tol,
        'passed': report.passed,
    }


def lfp_payload(report: LfpReport, spec: GaussianXbarSpec, passed: bool, reason: str) -> Dict[str, Any]:
    """Structure of the least favorable prior of a Gaussian problem."""
    return {
        'side': report.side,
        'family': spec.as_dict(),
        'prior_mass_at_boundary_sigma': report.prior_mass_at_boundary_sigma,
        'prior_mode_xi': report.prior_mode_xi,
        'xbar_density_distance': report.xbar_density_distance,
        'xi_marginal': dict(zip((f'{xi:g}' for xi in spec.xi_grid), report.xi_marginal.tolist())),
        'xi_marginal_distance': report.xi_marginal_distance,
        'xi_mean_error': report.xi_mean_error,
        'xbar_variance_error': report.xbar_variance_error,
        'truncation_edge_mass': report.truncation_edge_mass,
        'equal_variance': report.equal_variance,
        'lower_value': report.lower_value,
        'dual_value': report.dual_value,
        'passed': passed,
        'reason': reason,
    }


def write_prior(path: Path, spec: GaussianXbarSpec, report: SolveReport) -> None:
    """One row per null member: its parameters and prior weight."""
    rows = [(xi, variance, weight)
            for (xi, variance), weight in zip(member_parameters(spec), report.dual.prior.weights)]
    write_csv(path, ['xi', 'sigma_sq', 'weight'], rows)


def write_plot_data(output_dir: Path, problem: TestingProblem, report: SolveReport) -> List[Path]:
    """dual_ray.csv along the least favorable prior and test.csv with the densities and the test.

    A zero prior has no direction, so the ray then runs along the uniform prior.
    """
    prior = report.dual.prior.weights
    direction = prior if prior.sum() > 0.0 else np.ones(prior.size)
    scan = scan_dual_ray(problem, report.dual.alt_weights, direction, RAY_SCALES)

    ray_path = output_dir / DUAL_RAY_FILE
    write_csv(ray_path, ['scale', 'dual_objective'], zip(scan.scales, scan.values))

    null_labels = [f'null:{problem.null_family.label(index)}' for index in range(len(problem.null_family))]
    alt_labels = [f'alt:{problem.alt_family.label(index)}' for index in range(len(problem.alt_family))]
    header = ['atom', 'R'] + null_labels + alt_labels + ['phi']
    rows = []
    for index, atom in enumerate(problem.atoms):
        rows.append([atom, problem.reference.weights[index]]
                    + problem.null_family.matrix[:, index].tolist()
                    + problem.alt_family.matrix[:, index].tolist()
                    + [report.primal.test.values[index]])

    test_path = output_dir / TEST_FILE
    write_csv(test_path, header, rows)
    return [ray_path, test_path]
