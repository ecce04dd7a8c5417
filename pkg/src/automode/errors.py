"""Exception types shared across the package."""


class AutomodeError(Exception):
    """Base class for all errors raised by this package."""


class LoadError(AutomodeError):
    """A schema, facts, or examples file could not be loaded or validated."""


class ValidationError(AutomodeError):
    """An operation received inputs that violate its contract."""


class ConfigError(AutomodeError):
    """A hyper-parameter or flag value is out of range."""
