"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`MatmodError`,
so callers (the CLI in particular) can map failures to exit codes without
catching unrelated exceptions.
"""

import numpy as np


class MatmodError(Exception):
    """Base class for all library errors."""


class ShapeError(MatmodError, ValueError):
    """Operand dimensions do not match."""


class ArgumentError(MatmodError, ValueError):
    """An argument is outside the operation's domain."""


class InvertibilityError(MatmodError, np.linalg.LinAlgError):
    """A basis matrix is singular or too ill-conditioned to invert."""


class DefinitenessError(MatmodError, np.linalg.LinAlgError):
    """A matrix that must be symmetric (semi)definite is not."""


class SingularityError(MatmodError, np.linalg.LinAlgError):
    """A matrix that must be positive definite is numerically singular."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DegreesOfFreedomError(MatmodError, ValueError):
    """Too few residual degrees of freedom for the requested quantity."""


class NonUniquenessError(MatmodError, ValueError):
    """The requested parameters are not identifiable."""


class DecompositionError(MatmodError, ValueError):
    """Submodules are not pairwise orthogonal or do not span the space."""


class NumericalConsistencyError(MatmodError, ArithmeticError):
    """A computed quantity violates a property it must satisfy."""


class SingularWishartWarning(UserWarning):
    """Wishart draw with fewer degrees of freedom than its dimension."""


class InputError(MatmodError, ValueError):
    """Malformed user input (files, flags)."""


class ParseError(InputError):
    """A data cell could not be read as a finite number."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(InputError):
    """The CSV header does not describe a supported data layout."""
