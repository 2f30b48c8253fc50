"""Exception types shared across the package."""


class JamshieldError(Exception):
    """Base class for package errors."""


class DomainError(JamshieldError, ValueError):
    """A numerical routine was called outside its mathematical domain."""


class ConfigurationError(JamshieldError, ValueError):
    """Invalid experiment, environment or action-space configuration.

    ``key`` names the offending configuration entry when known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class TrainingDivergenceError(JamshieldError, FloatingPointError):
    """Network parameters or loss became non-finite during training."""
