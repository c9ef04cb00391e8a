"""Error types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class MatrixFormatError(InvalidInputError):
    """Raised when a matrix file does not conform to the phm-v1 schema."""


class ConsistencyError(RuntimeError):
    """Raised when two independent computations of the same quantity disagree.

    This always indicates a bug or a numerically hopeless input, never a
    routine condition, so it is kept distinct from InvalidInputError.
    """


class SearchBudgetExceeded(RuntimeError):
    """Raised when a backtracking search gives up before exhausting its space.

    Callers must treat this as "inconclusive", which is different from a
    completed search that found nothing.
    """
