"""Click handler for the Gaussian least favorable prior example."""
import click

from npdual.cli.config import Command, RunConfig
from npdual.cli.exceptions import CertificationFailed, ValidationFailed
from npdual.cli.options import (case_option, dump_tableau_option,
                                optional_input_option, output_dir_option,
                                refine_option, tolerance_options)
from npdual.cli.reports import lfp_payload, write_prior
from npdual.cli.utils import (Check, echo_summary, load_input,
                              solver_errors, tableau_stream,
                              validation_errors, verify_config, within)
from npdual.families import (check_lfp, gaussian_preset, gaussian_xbar_problem,
                             lfp_report)
from npdual.npsolver import solve_maxmin
from npdual.utils.constants import LFP_REPORT_FILE, PRIOR_FILE
from npdual.utils.output import write_json


@click.command(name='example-gaussian')
@optional_input_option
@case_option
@refine_option
@output_dir_option
@tolerance_options
@dump_tableau_option
def example_gaussian(input_path, case, refine, output_dir, tol_gap, tol_slack, dump_tableau):
    """Solve a Gaussian sample-mean problem and check the shape of its least favorable prior.

    Use --case for a built-in example or --input for a file with a "gaussian" object.
    """
    config = verify_config(RunConfig(command=Command.EXAMPLE_GAUSSIAN, input_path=input_path,
                                     case=int(case) if case is not None else None, refine=refine,
                                     output_dir=output_dir, tol_gap=tol_gap, tol_slack=tol_slack,
                                     dump_tableau=dump_tableau))

    if config.case is not None:
        spec = gaussian_preset(config.case, config.refine)
        with validation_errors():
            problem = gaussian_xbar_problem(spec)
    else:
        problem, _, spec = load_input(config.input_path)
        if spec is None:
            raise ValidationFailed('input file has no "gaussian" object')

    with tableau_stream(config.dump_tableau) as stream, solver_errors():
        report = solve_maxmin(problem, dump=stream)

    lfp = lfp_report(problem, spec, report)
    passed, reason = check_lfp(lfp, spec)

    lfp_path = config.output_dir / LFP_REPORT_FILE
    prior_path = config.output_dir / PRIOR_FILE
    write_json(lfp_path, lfp_payload(lfp, spec, passed, reason))
    write_prior(prior_path, spec, report)

    checks = [
        within('duality gap', report.gap, config.tol_gap),
        Check(name='prior structure', value=None, tolerance=None, passed=passed),
    ]
    echo_summary(f'example-gaussian: {reason}', checks, [lfp_path, prior_path])
    if not all(check.passed for check in checks):
        raise CertificationFailed(f'least favorable prior check failed: {reason}')
