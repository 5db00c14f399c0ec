"""Exception hierarchy shared by all usvclust modules.

The CLI maps these onto exit codes: ParameterError -> 2 (usage),
FormatError / ValidationError -> 3 (validation), NumericalError -> 4.
"""


class UsvClustError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(UsvClustError):
    """An argument or configuration value is out of range or inconsistent."""


class ValidationError(UsvClustError):
    """Input data violates an invariant (negative energy, duplicate id, ...)."""


class FormatError(UsvClustError):
    """A file does not parse under its declared format."""


class NumericalError(UsvClustError):
    """A numerical routine failed to produce a usable result."""
