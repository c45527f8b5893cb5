"""Exception hierarchy.

Every error carries a short ``category`` string used by the CLI as its
machine-readable failure code.
"""


class GraphSeriesError(Exception):
    category = "error"


class UnknownNodeError(GraphSeriesError, KeyError):
    category = "invalid_query"

    def __str__(self):
        return Exception.__str__(self)


class IndexRangeError(GraphSeriesError, IndexError):
    category = "invalid_query"


class DegenerateInputError(GraphSeriesError, ValueError):
    """Input is valid but too degenerate for the requested computation."""

    category = "degenerate_input"


class InvalidParameterError(GraphSeriesError, ValueError):
    category = "invalid_parameter"


class GenerationError(GraphSeriesError, RuntimeError):
    category = "generation_failed"


class FormatError(GraphSeriesError, ValueError):
    category = "format_error"

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
