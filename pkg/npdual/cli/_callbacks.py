"""Callback functions invoked by Click options."""
from pathlib import Path

import click


def output_dir_callback(_ctx, _param, value):
    """Create the output directory. Called whenever --output-dir is given."""
    path = Path(value)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise click.ClickException(f'can not create output directory {path}: {exc.strerror}') from exc

    return path
