"""CLI Utilities."""
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import click
from colorama import Fore, Style
from prettytable import PrettyTable

from npdual.attribute.exceptions import ConfigVerifyError
from npdual.cli.config import RunConfig
from npdual.cli.exceptions import ValidationFailed
from npdual.families import GaussianXbarSpec, gaussian_xbar_problem, spec_from_dict
from npdual.families.exceptions import FamiliesError
from npdual.logger.core import CoreLogger
from npdual.model import TestingProblem, problem_from_dict, validate_problem
from npdual.model.exceptions import ProblemFormatError, ProblemValidationError
from npdual.model.io import read_json
from npdual.npsolver.exceptions import InternalError, InvalidWeights
from npdual.oracle.exceptions import OracleError
from npdual.simplex.exceptions import NumericalBreakdown

logger = CoreLogger(component='cli')


@dataclass(frozen=True)
class Check:
    """One line of the console summary."""

    name: str
    value: Optional[float]
    tolerance: Optional[float]
    passed: bool


def verify_config(config: RunConfig) -> RunConfig:
    """Verify the run settings, turning failures into exit code 2."""
    try:
        config.verify()
    except ConfigVerifyError as exc:
        raise ValidationFailed(str(exc)) from exc
    return config


@contextmanager
def validation_errors() -> Iterator[None]:
    """Report bad input as a validation failure instead of a traceback."""
    try:
        yield
    except (ProblemValidationError, ConfigVerifyError, FamiliesError, InvalidWeights, OracleError) as exc:
        logger.warning(f'Input rejected: {exc}')
        raise ValidationFailed(str(exc)) from exc


@contextmanager
def solver_errors() -> Iterator[None]:
    """Report an ill-conditioned problem the simplex can not certify as a validation failure."""
    try:
        yield
    except (NumericalBreakdown, InternalError) as exc:
        logger.warning(f'Solver gave up: {exc}')
        raise ValidationFailed(f'solver could not certify a solution: {exc}') from exc


def read_input(path: str) -> Dict[str, Any]:
    """Decode a JSON input file.

    Raises:
        click.ClickException: When the file can not be read (exit code 1).
        ValidationFailed: When it is not valid JSON.
    """
    try:
        with validation_errors():
            data = read_json(path)
    except OSError as exc:
        raise click.ClickException(f'can not read {path}: {exc.strerror}') from exc
    return data


def load_input(path: str) -> Tuple[TestingProblem, Tuple[str, ...], Optional[GaussianXbarSpec]]:
    """Read and validate the problem of an input file.

    A file with a "gaussian" object describes a sample-mean family instead of listing densities.

    Returns:
        The validated problem, the atom labels in file order and the Gaussian spec if there is one.
    """
    data = read_input(path)
    with validation_errors():
        if not isinstance(data, dict):
            raise ProblemFormatError(field='<root>', reason='problem file must contain a JSON object')

        if 'gaussian' in data:
            spec = spec_from_dict(data['gaussian'])
            problem = gaussian_xbar_problem(spec)
            return problem, problem.atoms, spec

        raw = problem_from_dict(data)
        return validate_problem(raw), raw.atoms, None


@contextmanager
def tableau_stream(path: Optional[str]) -> Iterator[Optional[TextIO]]:
    """The simplex trace file, or None when no trace was requested."""
    if path is None:
        yield None
        return

    try:
        stream = open(path, 'w', encoding='utf-8')
    except OSError as exc:
        raise click.ClickException(f'can not write {path}: {exc.strerror}') from exc
    with stream:
        yield stream


def within(name: str, value: Optional[float], tolerance: float) -> Check:
    """A check that passes when value is at most tolerance."""
    return Check(name=name, value=value, tolerance=tolerance, passed=value is not None and value <= tolerance)


def _number(value: Optional[float]) -> str:
    return '-' if value is None else f'{value:.3e}'


def summary_table(checks: Sequence[Check]) -> PrettyTable:
    """Console table with a coloured verdict per check."""
    table = PrettyTable()

    # The first row are the headers
    table.field_names = ['Check', 'Value', 'Tolerance', 'Result']
    table.align['Check'] = 'l'

    for check in checks:
        verdict = Fore.GREEN + 'PASS' if check.passed else Fore.RED + 'FAIL'
        table.add_row([check.name, _number(check.value), _number(check.tolerance), verdict + Style.RESET_ALL])

    return table


def echo_summary(title: str, checks: Sequence[Check], files: List[Path]) -> None:
    """Print the checks and the files that were written."""
    click.echo(f'[{title}]')
    click.echo(summary_table(checks))
    for path in files:
        click.echo(f'wrote {path}')
