"""Validated settings of one CLI run."""
from enum import Enum

from npdual.attribute import NpdualAttribute, VerifiedConfig
from npdual.attribute.exceptions import ConfigVerifyError
from npdual.utils.constants import DEFAULT_TRIALS, TOL_GAP, TOL_SLACK
from npdual.utils.numbers import POSITIVE, NpdualRange

NON_NEGATIVE = NpdualRange(min=0, max=float('inf'))
AT_LEAST_ONE = NpdualRange(min=1, max=float('inf'))


class Command(Enum):
    """The npdual sub-commands."""

    SOLVE = 'solve'
    CERTIFY = 'certify'
    EXAMPLE_GAUSSIAN = 'example-gaussian'
    ORACLE_CHECK = 'oracle-check'


class RunConfig(VerifiedConfig):
    """Everything a command needs besides the problem itself."""

    command = NpdualAttribute(required=True, choices=list(Command))
    input_path = NpdualAttribute(types=[str])
    output_dir = NpdualAttribute(required=True)
    tol_gap = NpdualAttribute(default=TOL_GAP, types=[float, int], number_range=POSITIVE)
    tol_slack = NpdualAttribute(default=TOL_SLACK, types=[float, int], number_range=POSITIVE)
    seed = NpdualAttribute(types=[int], number_range=NON_NEGATIVE)
    trials = NpdualAttribute(default=DEFAULT_TRIALS, types=[int], number_range=NON_NEGATIVE)
    emit_plot_data = NpdualAttribute(default=False, types=[bool])
    dump_tableau = NpdualAttribute(types=[str])
    candidate = NpdualAttribute(types=[str])
    case = NpdualAttribute(choices=[1, 2])
    refine = NpdualAttribute(default=1, types=[int], number_range=AT_LEAST_ONE)
    steps = NpdualAttribute(default=20, types=[int], number_range=AT_LEAST_ONE)

    def verify_extra(self, errors: ConfigVerifyError) -> None:
        """Per-command requirements."""
        if self.command is Command.CERTIFY and self.seed is None:
            errors.add_attribute_error(name='seed', error='certify samples tests and needs --seed')

        if self.command is Command.EXAMPLE_GAUSSIAN and self.case is None and self.input_path is None:
            errors.add_attribute_error(name='case', error='give --case or an --input file with a "gaussian" object')

        if self.command in (Command.SOLVE, Command.CERTIFY, Command.ORACLE_CHECK) and self.input_path is None:
            errors.add_attribute_error(name='input_path', error='--input is required')
