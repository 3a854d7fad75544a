"""Exception hierarchy shared by every module."""


class HideError(Exception):
    """Base class for all library errors."""


class DimensionError(HideError, ValueError):
    pass


class ConfigurationError(HideError, ValueError):
    pass


class ContractError(HideError, ValueError):
    """An operation was called with inputs violating its preconditions."""


class CatalogError(HideError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(HideError, ValueError):
    pass


class ValidationError(HideError, ValueError):
    pass


class AggregationError(HideError, ValueError):
    pass
