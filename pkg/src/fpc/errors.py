"""Exception hierarchy shared by the library and the CLI.

Each class carries an ``exit_code`` so the command-line front end can map
failures to distinct process exit statuses without a lookup table.
"""


class FpcError(Exception):
    exit_code = 1


class DimensionMismatchError(FpcError, ValueError):
    exit_code = 8


class InvalidLabelError(FpcError, ValueError):
    exit_code = 3


class EmptyDatasetError(FpcError, ValueError):
    exit_code = 4


class CsvFormatError(FpcError, ValueError):
    exit_code = 3


class FeatureDimOverflowError(FpcError, OverflowError):
    exit_code = 3


class ModelFormatError(FpcError, ValueError):
    exit_code = 5


class ChecksumError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class NumericalError(FpcError, ArithmeticError):
    """Internal numerical breakdown (non-finite iterate, failed factorization)."""

    exit_code = 6


class NonFiniteError(NumericalError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class FactorizationError(NumericalError):
    pass


class InstanceTooLargeError(FpcError, ValueError):
    exit_code = 3
