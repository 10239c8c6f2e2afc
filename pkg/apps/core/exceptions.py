"""
Exceptions shared across the groupmap apps.
"""


class MapFormatError(ValueError):
    """A map, probability map, manifest or component file is malformed."""


class NumericalError(ArithmeticError):
    """An objective became non-finite during inference."""
