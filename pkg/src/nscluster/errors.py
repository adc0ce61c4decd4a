"""Exception types shared across the package."""


class NsClusterError(Exception):
    """Base class for errors raised by this package."""


class CsvParseError(NsClusterError, ValueError):
    """A CSV cell could not be parsed.

    ``row`` is the 0-based index among data rows (a header row, when present,
    is not counted); ``col`` is the 0-based column index.
    """

    def __init__(self, row: int, col: int, message: str | None = None):
        self.row = row
        self.col = col
        super().__init__(message or f"cannot parse cell at row {row}, col {col}")


class EmptyDatasetError(NsClusterError, ValueError):
    """The input contains no data rows."""


class InvalidSpecError(NsClusterError, ValueError):
    """A scatter-generator specification is inconsistent."""


class DegenerateWeightsError(NsClusterError, ArithmeticError):
    """Membership weights underflowed or overflowed past the floors."""


class NonFiniteCostError(NsClusterError, ArithmeticError):
    """The objective became NaN or infinite during optimization."""

    def __init__(self, iteration: int, value: float):
        self.iteration = iteration
        self.value = value
        super().__init__(f"objective became non-finite ({value}) at iteration {iteration}")
