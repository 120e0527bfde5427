"""Descriptor which defines any verifiable attribute of a configuration class."""
# See https://docs.python.org/3/glossary.html#term-descriptor for details on descriptors

import inspect
from typing import Any, Dict, List, Optional, Type

from npdual.attribute.exceptions import ConfigVerifyError
from npdual.utils.numbers import NpdualRange


class NpdualAttribute:
    """Descriptor class for configuration attributes."""

    # pylint: disable=too-many-arguments
    def __init__(self, required: bool = False, default: Any = None, choices: Optional[List[Any]] = None,
                 types: Optional[List[Type]] = None, number_range: Optional[NpdualRange] = None,
                 help_text: str = ''):
        """Constructor for the attribute.

        Args:
            required (bool, optional): Indicates if the attribute must be defined. Defaults to False.
            default (Any, optional): The value for the parameter if none is specified. Defaults to None.
            choices (List[Any], optional): List of valid values for the parameter. Defaults to None.
            types (List[Type], optional): List of types that are allowed for the attribute
            number_range (NpdualRange, optional): Allowable int or float values. Defaults to None.
            help_text (str, optional): One line description, reused in CLI help.
        """
        self.choices = choices
        self.default = default
        self.number_range = number_range
        self.required = required
        self.types = types
        self.help_text = help_text

    def __set_name__(self, owner, name):
        """Called by Python to let the descriptor class know the parameter name holding this class."""
        self.name = name # pylint: disable=attribute-defined-outside-init

    def __set__(self, instance, value):
        """Called by Python to set the value of the parameter."""
        instance.__dict__[self.name] = value

    def __get__(self, instance, _owner):
        """Called by Python to fetch the value of the parameter."""
        if instance is None:
            return self

        if self.name not in instance.__dict__:
            return self.default

        return instance.__dict__[self.name]


class VerifiedConfig:
    """Base class for configuration objects declared with NpdualAttribute class variables."""

    # Exception type raised by verify(); subclasses may narrow it
    error_class: Type[ConfigVerifyError] = ConfigVerifyError

    def __init__(self, **values: Any) -> None:
        """Assign any of the declared attributes from keyword arguments."""
        attributes = self.attributes()
        for name, value in values.items():
            if name not in attributes:
                raise TypeError(f'{type(self).__name__} has no attribute {name}')
            setattr(self, name, value)

    @classmethod
    def attributes(cls) -> Dict[str, NpdualAttribute]:
        """All of the NpdualAttribute declarations, keyed by attribute name."""
        return {name: value for name, value in inspect.getmembers(cls) if isinstance(value, NpdualAttribute)}

    def as_dict(self) -> Dict[str, Any]:
        """Current values of every declared attribute."""
        return {name: getattr(self, name) for name in self.attributes()}

    def verify(self) -> None:
        """Verify all of the attributes.

        Raises:
            ConfigVerifyError: Raised if any of the attribute verifications fail.
        """
        verify_error_info = self.error_class(config_name=type(self).__name__)

        for attr_name, attribute in self.attributes().items():
            attr_value = getattr(self, attr_name)

            if attribute.required and attr_value is None:
                verify_error_info.add_attribute_error(name=attr_name, error='Attribute is required but value is None')
                continue

            if attr_value is None:
                continue

            if attribute.choices and attr_value not in attribute.choices:
                error = f'{attr_value} is not one of the available choices: {attribute.choices}'
                verify_error_info.add_attribute_error(name=attr_name, error=error)

            if attribute.number_range and attribute.number_range.in_range(attr_value) is False:
                verify_error_info.add_attribute_error(
                    name=attr_name,
                    error=f'Attribute value ({attr_value}) not in range {attribute.number_range.describe()}.')

            # Make sure that the attribute type is allowed
            if attribute.types and not isinstance(attr_value, tuple(attribute.types)):
                verify_error_info.add_attribute_error(name=attr_name,
                                                      error=f'value of type {type(attr_value)} not allowed')

        self.verify_extra(verify_error_info)

        if verify_error_info.attribute_errors:
            raise verify_error_info

    def verify_extra(self, errors: ConfigVerifyError) -> None:
        """Hook for cross-attribute checks. Add findings to errors instead of raising."""
