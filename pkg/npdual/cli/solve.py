"""Click handlers for the solve and certify commands."""
from pathlib import Path
from typing import Any, Dict, List, Tuple

import click
import numpy as np

from npdual.certify import (check_saddle, check_slackness, check_weak_duality,
                            ck_certificate, decompose_structure)
from npdual.certify.exceptions import (CertificateInconsistency, NotCertified,
                                       ScalarAlphaRequired)
from npdual.cli.config import Command, RunConfig
from npdual.cli.exceptions import CertificationFailed
from npdual.cli.options import (candidate_option, dump_tableau_option,
                                emit_plot_data_option, input_option,
                                output_dir_option, seed_option,
                                tolerance_options, trials_option)
from npdual.cli.reports import (ck_payload, problem_payload, saddle_payload,
                                slackness_payload, solve_payload,
                                structure_payload, weak_duality_payload,
                                write_plot_data)
from npdual.cli.utils import (Check, echo_summary, load_input, read_input,
                              solver_errors, tableau_stream,
                              validation_errors, verify_config, within)
from npdual.logger.core import CoreLogger
from npdual.model import TestingProblem, load_candidate
from npdual.npsolver import SolveReport, solve_maxmin
from npdual.utils.constants import REPORT_FILE, TOL_CHAIN
from npdual.utils.output import write_json

logger = CoreLogger(component='cli')


def _certificates(problem: TestingProblem, phi: np.ndarray, alt_weights: np.ndarray, prior: np.ndarray,
                  config: RunConfig) -> Tuple[Dict[str, Any], List[Check]]:
    """Slackness, structure and single-level certificates of one triple."""
    slackness = check_slackness(problem, phi, alt_weights, prior, tol=config.tol_slack)
    checks = [
        within('upper violation', slackness.upper_violation, config.tol_slack),
        within('lower violation', slackness.lower_violation, config.tol_slack),
        within('binding violation', slackness.binding_violation, config.tol_slack),
        within('size excess', slackness.size_excess, config.tol_slack),
    ]

    decomposition, structure_reason = None, ''
    try:
        decomposition = decompose_structure(problem, phi, alt_weights, prior, tol=config.tol_slack)
    except NotCertified as exc:
        structure_reason = exc.reason
    checks.append(Check(name='0-1 structure', value=None, tolerance=None, passed=decomposition is not None))

    certificate, ck_reason = None, ''
    try:
        certificate = ck_certificate(problem, phi, alt_weights, prior, tol=config.tol_slack,
                                     seed=config.seed if config.seed is not None else 0)
    except ScalarAlphaRequired:
        ck_reason = 'null members have different levels'
    except NotCertified as exc:
        ck_reason = exc.reason
        checks.append(Check(name='single-level identity', value=None, tolerance=config.tol_slack, passed=False))
    if certificate is not None:
        checks.append(within('single-level identity', certificate.identity_residual, config.tol_slack))
        checks.append(within('enlarged null membership', certificate.membership_residual, config.tol_slack))

    payload = {
        'slackness': slackness_payload(slackness),
        'ck_certificate': ck_payload(certificate, ck_reason),
        'structure': structure_payload(problem, decomposition, structure_reason),
    }
    return payload, checks


def _solve_checks(report: SolveReport, config: RunConfig) -> List[Check]:
    chain_slack = max(report.middle_value - report.dual_value, report.lower_value - report.middle_value, 0.0)
    return [
        within('duality gap', report.gap, config.tol_gap),
        within('value chain', chain_slack, TOL_CHAIN),
    ]


def _weak_duality(problem: TestingProblem, phi, alt_weights, prior) -> Tuple[Dict[str, Any], float]:
    """Payload and margin; a negative margin on a feasible test is reported, not raised."""
    try:
        report = check_weak_duality(problem, phi, alt_weights, prior)
    except CertificateInconsistency as exc:
        return {'inconsistent_margin': exc.margin}, float('inf')
    return weak_duality_payload(report), report.margin


def _finish(title: str, config: RunConfig, payload: Dict[str, Any], checks: List[Check], files: List[Path]) -> None:
    """Write report.json, print the summary and fail the run when a check failed."""
    payload['certified'] = all(check.passed for check in checks)
    report_path = config.output_dir / REPORT_FILE
    write_json(report_path, payload)

    echo_summary(title, checks, [report_path] + files)
    if not payload['certified']:
        failed = ', '.join(check.name for check in checks if not check.passed)
        logger.warning(f'Certificates failed: {failed}')
        raise CertificationFailed(f'certification failed: {failed}')


@click.command(name='solve')
@input_option
@output_dir_option
@seed_option
@tolerance_options
@emit_plot_data_option
@dump_tableau_option
def solve(input_path, output_dir, seed, tol_gap, tol_slack, emit_plot_data, dump_tableau):
    """Solve the max-min testing problem and certify the solution."""
    config = verify_config(RunConfig(command=Command.SOLVE, input_path=input_path, output_dir=output_dir, seed=seed,
                                     tol_gap=tol_gap, tol_slack=tol_slack, emit_plot_data=emit_plot_data,
                                     dump_tableau=dump_tableau))
    problem, _, _ = load_input(config.input_path)

    with tableau_stream(config.dump_tableau) as stream, solver_errors():
        report = solve_maxmin(problem, dump=stream)

    certificates, checks = _certificates(problem, report.primal.test.values, report.dual.alt_weights,
                                         report.dual.prior.weights, config)
    payload = {'problem': problem_payload(problem), 'solve': solve_payload(problem, report)}
    payload.update(certificates)

    files = write_plot_data(config.output_dir, problem, report) if config.emit_plot_data else []
    _finish('solve', config, payload, _solve_checks(report, config) + checks, files)


@click.command(name='certify')
@input_option
@output_dir_option
@seed_option
@tolerance_options
@trials_option
@candidate_option
@emit_plot_data_option
@dump_tableau_option
def certify(input_path, output_dir, seed, tol_gap, tol_slack, trials, candidate, emit_plot_data, dump_tableau):
    """Run every certificate, including the sampled saddle point check.

    Without --candidate the solver's triple is certified.
    """
    config = verify_config(RunConfig(command=Command.CERTIFY, input_path=input_path, output_dir=output_dir, seed=seed,
                                     tol_gap=tol_gap, tol_slack=tol_slack, trials=trials, candidate=candidate,
                                     emit_plot_data=emit_plot_data, dump_tableau=dump_tableau))
    problem, file_atoms, _ = load_input(config.input_path)
    payload: Dict[str, Any] = {'problem': problem_payload(problem)}
    checks: List[Check] = []
    files: List[Path] = []

    if config.candidate is not None:
        data = read_input(config.candidate)
        with validation_errors():
            phi, alt_weights, prior = load_candidate(data, problem, file_atoms)
            payload['weak_duality'], margin = _weak_duality(problem, phi, alt_weights, prior)
        payload['solve'] = None
    else:
        with tableau_stream(config.dump_tableau) as stream, solver_errors():
            report = solve_maxmin(problem, dump=stream)
        phi, alt_weights, prior = report.primal.test.values, report.dual.alt_weights, report.dual.prior.weights
        payload['solve'] = solve_payload(problem, report)
        payload['weak_duality'], margin = _weak_duality(problem, phi, alt_weights, prior)
        checks.extend(_solve_checks(report, config))
        if config.emit_plot_data:
            files = write_plot_data(config.output_dir, problem, report)

    checks.append(within('weak duality margin', margin, config.tol_gap))

    certificates, certificate_checks = _certificates(problem, phi, alt_weights, prior, config)
    payload.update(certificates)
    checks.extend(certificate_checks)

    saddle = check_saddle(problem, phi, alt_weights, trials=config.trials, seed=config.seed, tol=config.tol_slack)
    payload['saddle'] = saddle_payload(saddle)
    checks.append(within('saddle left', saddle.left_violation, config.tol_slack))
    checks.append(within('saddle right', saddle.right_violation, config.tol_slack))

    _finish('certify', config, payload, checks, files)
