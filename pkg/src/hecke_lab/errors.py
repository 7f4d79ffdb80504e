"""Exception types shared across the package."""


class HeckeLabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(HeckeLabError):
    """A family descriptor or run configuration is malformed."""


class PrecisionError(HeckeLabError):
    """An operation asked for more digits than a truncated element stores.

    Raised when a projection targets a level that does not divide the stored
    level, or when an action would need data below the known truncation.
    """


class LevelCapError(HeckeLabError):
    """Refinement or enumeration would exceed the configured level cap."""


class NotInCornerError(HeckeLabError):
    """A crossed-product element is not fixed by two-sided multiplication
    with the distinguished projection, so it admits no corner decomposition."""
