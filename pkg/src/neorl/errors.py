"""Exception types raised by neorl."""


class ConfigurationError(ValueError):
    """Raised when parameters or a network spec violate their invariants."""
