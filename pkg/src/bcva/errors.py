"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its accuracy target,
    or a simulation produced non-finite values."""


class ConfigError(ValueError):
    """A run configuration failed validation; message names the field."""
