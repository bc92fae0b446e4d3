"""Exception types shared across the package."""


class BiphotonError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateSpectrumError(BiphotonError, ValueError):
    """A construction produced an (effectively) zero amplitude matrix.

    A zero matrix cannot be normalized to a unit-norm spectrum, so it does
    not represent a two-photon state.
    """


class SpectrumFileError(BiphotonError, ValueError):
    """A spectrum file could not be parsed.

    ``line`` and ``column`` locate the first offending cell (1-based);
    they are 0 when the problem is structural rather than cell-local.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ConfigError(BiphotonError, ValueError):
    """Invalid run configuration (CLI flags or scan specification)."""
