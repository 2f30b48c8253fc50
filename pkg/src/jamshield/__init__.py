"""Reinforcement-learning transmitter against a reactive, threshold-switching jammer."""

from jamshield.errors import (
    ConfigurationError,
    DomainError,
    JamshieldError,
    TrainingDivergenceError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DomainError",
    "JamshieldError",
    "TrainingDivergenceError",
    "__version__",
]
