"""Exception hierarchy shared by every module."""


class AccountingError(Exception):
    """Base class for all errors raised by this package."""


class GridFormatError(AccountingError, ValueError):
    """Malformed ESRI ASCII grid text."""


class AlignmentError(AccountingError, ValueError):
    """Two rasters do not share the same geometry."""


class HydrologyError(AccountingError):
    """Unresolvable flats, cycles in a flow graph, or an empty DEM."""


class ParameterError(AccountingError, ValueError):
    """A model parameter is missing or outside its admissible range."""


class AccountError(AccountingError, ValueError):
    """Inconsistent inputs to an account or statement builder."""


class ConfigError(AccountingError):
    """Invalid run configuration."""
