"""Exception types shared across the library.

The CLI maps these onto process exit codes: assertion-style failures exit 1,
configuration problems exit 2, capacity refusals exit 3.
"""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class ConfigError(ValueError):
    """An experiment configuration is malformed; the message names the field."""


class CapacityError(RuntimeError):
    """A request exceeds the documented desk-scale limits."""


class BaselineError(AssertionError):
    """A frozen-baseline regression check failed."""


class RegimeWarning(UserWarning):
    """Inputs are outside the asymptotic regime a bound was stated for."""
