"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A distribution or model parameter is outside its admissible range."""


class InfiniteMeanError(ParameterError):
    """The claim distribution has no finite mean."""


class PrecisionError(ArithmeticError):
    """Working precision was exhausted; retry with a wider mantissa."""


class ModelClassError(RuntimeError):
    """An operation was invoked on a model of the wrong class, or a case
    that the classification rules out was reached."""


class ConfigError(ValueError):
    """A run configuration could not be parsed."""
