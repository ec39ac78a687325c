"""Exception hierarchy shared by every module of the package."""


class WdbcError(Exception):
    """Base class for all errors raised by wdbc_ml."""


class DimensionError(WdbcError, ValueError):
    """Operand shapes do not line up."""


class ConfigurationError(WdbcError, ValueError):
    """A hyperparameter or option is outside its valid range."""


class ParseError(WdbcError, ValueError):
    """A WDBC input line could not be decoded."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyDatasetError(WdbcError, ValueError):
    """Input contained no records."""


class ConstantFeatureError(WdbcError, ValueError):
    """A feature column has zero variance and cannot be standardized."""

    def __init__(self, column, name=None):
        label = f"{column} ({name})" if name else str(column)
        super().__init__(f"feature column {label} has zero standard deviation")
        self.column = column


class LabelEncodingError(WdbcError, ValueError):
    """Labels are not in the encoding an operation expects."""


class NotFittedError(WdbcError, AttributeError):
    """An estimator was used before ``fit``."""
