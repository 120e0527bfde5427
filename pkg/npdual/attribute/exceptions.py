"""Exceptions for the attribute module."""
from typing import Dict, List

from colorama import Fore, Style


class ConfigVerifyError(Exception):
    """Raised when a configuration object fails to verify."""

    def __init__(self, config_name: str, *args: object) -> None:
        """Default constructor."""
        super().__init__(*args)

        self.config_name: str = config_name
        self.attribute_errors: Dict[str, List[str]] = {}

    def add_attribute_error(self, name: str, error: str) -> None:
        """Add an attribute error to the current verification failure.

        Args:
            name (str): Name of the offending attribute
            error (str): Human readable description of the problem
        """
        # Create a list for the key, if one is not already present
        if name not in self.attribute_errors:
            self.attribute_errors[name] = []

        self.attribute_errors[name].append(error)

    def __str__(self) -> str:
        """Flatten all of the attribute errors into a single line."""
        details = '; '.join(f'{name}: {", ".join(errors)}' for name, errors in self.attribute_errors.items())
        return f'{self.config_name} failed verification ({details})'

    def print(self):
        """Print out the exception."""
        print(Fore.RED + f'[{self.config_name}]')

        for attr_name, attr_errors in self.attribute_errors.items():
            print(Fore.RED + f'!!{attr_name}')

            for error in attr_errors:
                print(Fore.RED + f'\t{error}')

        print(Style.RESET_ALL)
