"""Exception hierarchy shared by every module of the package."""


class SlowdecError(ValueError):
    """Base class for all errors raised by slowdec."""


class GeneratorError(SlowdecError):
    """A sequence specification has an unknown kind or invalid parameters."""


class RadiusError(SlowdecError):
    """A request reaches beyond the radius up to which zeros were materialized."""


class AtZeroError(SlowdecError):
    """Evaluation point lies within the exclusion radius of a zero."""


class PoleError(SlowdecError):
    """Evaluation of a quotient exactly at a zero of its denominator."""


class ConfigError(SlowdecError):
    """A run configuration could not be parsed or validated."""
