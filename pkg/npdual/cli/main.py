"""Main entrypoint for the application."""
import click
from colorama import init as colorama_init

from npdual.cli.gaussian import example_gaussian
from npdual.cli.oracle import oracle_check
from npdual.cli.solve import certify, solve
from npdual.logger.utils import setup_logging


@click.group(name='npdual')
@click.pass_context
def cli(ctx):
    """Composite Neyman-Pearson testing on finite spaces, with certificates."""
    setup_logging()

    # Needs to be called for initialization on Windows platforms
    colorama_init()

    ctx.ensure_object(dict)


# Add all of the sub-commands
cli.add_command(solve)
cli.add_command(certify)
cli.add_command(example_gaussian)
cli.add_command(oracle_check)
