"""Exception hierarchy shared across the package.

The split mirrors the CLI exit-code contract: validation problems
(GridError, GeometryError) exit 1, numerical failures
(DegenerateFieldError, NumericalDivergenceError) exit 2, and IO/format
problems (FieldFormatError, OSError) exit 3.
"""


class GridError(ValueError):
    """Invalid grid parameters or weight evaluation on the thin plane."""


class GeometryError(ValueError):
    """Ball not contained in the box, radius below the reliable minimum,
    or a query point outside the grid."""


class FieldFormatError(ValueError):
    """Malformed FBX1 header or payload."""


class DegenerateFieldError(ArithmeticError):
    """Zero boundary mass: frequency / rescaling undefined."""


class NumericalDivergenceError(FloatingPointError):
    """NaN or Inf detected during an iterative solve."""
