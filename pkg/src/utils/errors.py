#!/usr/bin/env python3
"""
Exception hierarchy shared by the library and the command line.

The library raises; only src.main catches and maps to exit codes:
InputError/ParameterError -> 2, BasisValidationError -> 1.
"""


class EntanglementToolError(Exception):
    """Base class for all errors raised by this package."""


class InputError(EntanglementToolError, ValueError):
    """Malformed user input: unknown names, bad files, bad strings."""


class DimensionError(InputError):
    """Shapes or subsystem dimensions do not match."""


class ParameterError(EntanglementToolError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class NumericalIntegrityError(EntanglementToolError, ArithmeticError):
    """A quantity that must be real or finite is not."""


class BasisValidationError(EntanglementToolError):
    """A set of operators failed complete-orthogonal-basis validation."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"basis '{report.label}' failed validation: {report.summary()}")
