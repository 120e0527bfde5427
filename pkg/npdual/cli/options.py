"""Module for common Click options."""
import click

from npdual.cli._callbacks import output_dir_callback
from npdual.utils.constants import DEFAULT_TRIALS, TOL_GAP, TOL_SLACK


def input_option(function):
    """Decorator for the problem file argument."""
    function = click.option('--input', 'input_path', required=True,
                            type=click.Path(dir_okay=False), help='JSON problem file')(function)
    return function

def optional_input_option(function):
    """Decorator for commands that can also run without a problem file."""
    function = click.option('--input', 'input_path', default=None,
                            type=click.Path(dir_okay=False), help='JSON problem file')(function)
    return function

def output_dir_option(function):
    """Decorator for the report directory."""
    function = click.option('--output-dir', default='.', show_default=True, callback=output_dir_callback,
                            help='Directory the reports are written to')(function)
    return function

def seed_option(function):
    """Decorator for the sampling seed."""
    function = click.option('--seed', type=int, default=None, help='Seed for every sampled check')(function)
    return function

def tolerance_options(function):
    """Decorator for the certificate tolerances."""
    function = click.option('--tol-gap', type=float, default=TOL_GAP, show_default=True,
                            help='Largest accepted duality gap')(function)
    function = click.option('--tol-slack', type=float, default=TOL_SLACK, show_default=True,
                            help='Largest accepted complementary slackness violation')(function)
    return function

def emit_plot_data_option(function):
    """Decorator for the CSV plot data switch."""
    function = click.option('--emit-plot-data/--no-emit-plot-data', default=False,
                            help='Also write dual_ray.csv and test.csv')(function)
    return function

def dump_tableau_option(function):
    """Decorator for the simplex trace file."""
    function = click.option('--dump-tableau', type=click.Path(dir_okay=False), default=None,
                            help='Write every simplex tableau to this file')(function)
    return function

def trials_option(function):
    """Decorator for the number of sampled tests in the saddle check."""
    function = click.option('--trials', type=int, default=DEFAULT_TRIALS, show_default=True,
                            help='Sampled feasible tests for the saddle check')(function)
    return function

def candidate_option(function):
    """Decorator for a user supplied triple."""
    function = click.option('--candidate', type=click.Path(dir_okay=False), default=None,
                            help='JSON file with "phi", "q" and "lambda" to certify instead of solving')(function)
    return function

def case_option(function):
    """Decorator for the Gaussian preset."""
    function = click.option('--case', type=click.Choice(['1', '2']), default=None,
                            help='Built-in Gaussian example')(function)
    return function

def refine_option(function):
    """Decorator for the Gaussian grid refinement."""
    function = click.option('--refine', type=int, default=1, show_default=True,
                            help='Resolution multiplier for the preset grids')(function)
    return function

def steps_option(function):
    """Decorator for the brute force grid resolution."""
    function = click.option('--steps', type=int, default=20, show_default=True,
                            help='Grid steps per atom for the brute force search')(function)
    return function
