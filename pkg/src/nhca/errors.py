"""Exception types shared across the package."""


class NhcaError(Exception):
    """Base class for all errors raised by this package."""


class NotSquare(NhcaError, ValueError):
    pass


class NotSymmetric(NhcaError, ValueError):
    pass


class NonFinite(NhcaError, ValueError):
    pass


class DimensionMismatch(NhcaError, ValueError):
    pass


class CholeskyFailure(NhcaError, ArithmeticError):
    """The shifted matrix was not positive definite; callers may retry with a larger ridge."""


class EigenFailure(NhcaError, ArithmeticError):
    pass


class DegenerateClass(NhcaError, ValueError):
    """A training class is empty or the problem has fewer than two classes."""


class SingularOmega(NhcaError, ValueError):
    """The regularized pencil transform is degenerate (nu1 * nu2 == 1)."""


class QpNotConverged(NhcaError, ArithmeticError):
    pass


class DegenerateData(NhcaError, ValueError):
    """Clustering input has fewer than two distinct rows."""


class LengthMismatch(NhcaError, ValueError):
    pass


class EmptyInput(NhcaError, ValueError):
    pass


class TooFewSamples(NhcaError, ValueError):
    pass


class AllPointsFailed(NhcaError, RuntimeError):
    """Every grid-search candidate failed to train."""


class ParseError(NhcaError, ValueError):
    """A feature cell could not be parsed as a number.

    Attributes row and col are 1-based file coordinates.
    """

    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"row {row}, column {col}: cannot parse {value!r} as a number")


class MissingValues(NhcaError, ValueError):
    """One or more rows contain empty cells.  ``rows`` lists 1-based row numbers."""

    def __init__(self, rows):
        self.rows = list(rows)
        super().__init__(f"missing values in rows {self.rows}")


class SingleClass(NhcaError, ValueError):
    """The label column contains fewer than two distinct classes."""
