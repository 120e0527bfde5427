"""Click handler for comparing the solver with the independent oracles."""
from typing import Any, Dict, List

import click

from npdual.cli.config import Command, RunConfig
from npdual.cli.exceptions import CertificationFailed
from npdual.cli.options import input_option, output_dir_option, steps_option
from npdual.cli.reports import problem_payload
from npdual.cli.utils import (Check, echo_summary, load_input,
                              solver_errors, validation_errors,
                              verify_config, within)
from npdual.npsolver import solve_maxmin
from npdual.oracle import classic_np_problem, grid_bruteforce
from npdual.utils.constants import ORACLE_REPORT_FILE, TOL_CHAIN
from npdual.utils.output import write_json


@click.command(name='oracle-check')
@input_option
@output_dir_option
@steps_option
def oracle_check(input_path, output_dir, steps):
    """Compare the solver with the closed-form test and a grid search.

    The closed form only applies when both families have one member. The grid search may never beat
    the solver.
    """
    config = verify_config(RunConfig(command=Command.ORACLE_CHECK, input_path=input_path, output_dir=output_dir,
                                     steps=steps))
    problem, _, _ = load_input(config.input_path)
    with solver_errors():
        report = solve_maxmin(problem)

    with validation_errors():
        grid = grid_bruteforce(problem, steps=config.steps)

    payload: Dict[str, Any] = {
        'problem': problem_payload(problem),
        'lower_value': report.lower_value,
        'grid': {
            'value': grid.value,
            'steps': grid.steps,
            'points': grid.points,
            'feasible': grid.feasible,
            'test': dict(zip(problem.atoms, grid.test.values.tolist())),
        },
    }
    checks: List[Check] = [within('grid below solver', grid.value - report.lower_value, TOL_CHAIN)]

    if len(problem.null_family) == 1 and len(problem.alt_family) == 1:
        classic = classic_np_problem(problem)
        difference = abs(report.lower_value - classic.power)
        payload['classic_np'] = {
            'power': classic.power,
            'size': classic.size,
            'quantile': classic.quantile,
            'delta': classic.delta,
            'test': dict(zip(problem.atoms, classic.test.values.tolist())),
            'difference': difference,
        }
        checks.append(within('closed form agrees', difference, TOL_CHAIN))
    else:
        payload['classic_np'] = None

    payload['passed'] = all(check.passed for check in checks)
    report_path = config.output_dir / ORACLE_REPORT_FILE
    write_json(report_path, payload)

    echo_summary('oracle-check', checks, [report_path])
    if not payload['passed']:
        raise CertificationFailed('the solver disagrees with an oracle')
