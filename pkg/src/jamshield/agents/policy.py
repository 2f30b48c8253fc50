"""Exploration schedule and epsilon-greedy selection shared by both learners."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from jamshield.errors import ConfigurationError


@dataclass(frozen=True)
class LearnerConfig:
    alpha: float = 0.1
    gamma: float = 0.95
    eps_start: float = 1.0
    eps_final: float = 0.01
    eps_decay: float = 0.999
    # network-only settings
    eta: float = 1e-3
    batch: int = 64
    buffer_capacity: int = 100_000
    target_sync: int = 1000
    hidden: tuple = (64, 64)

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ConfigurationError(f"alpha must lie in (0, 1], got {self.alpha}", key="alpha")
        if not 0 <= self.gamma <= 1:
            raise ConfigurationError(f"gamma must lie in [0, 1], got {self.gamma}", key="gamma")
        for key in ("eps_start", "eps_final"):
            if not 0 <= getattr(self, key) <= 1:
                raise ConfigurationError(f"{key} must lie in [0, 1]", key=key)
        if self.eps_final > self.eps_start:
            raise ConfigurationError("eps_final must not exceed eps_start", key="eps_final")
        if not 0 < self.eps_decay < 1:
            raise ConfigurationError(f"eps_decay must lie in (0, 1), got {self.eps_decay}", key="eps_decay")
        if not self.eta >= 0:
            raise ConfigurationError("eta must be >= 0", key="eta")
        for key in ("batch", "buffer_capacity", "target_sync"):
            if int(getattr(self, key)) != getattr(self, key) or getattr(self, key) < 1:
                raise ConfigurationError(f"{key} must be a positive integer", key=key)
        if self.batch > self.buffer_capacity:
            raise ConfigurationError("batch cannot exceed buffer_capacity", key="batch")


def select_action(values, eps: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy choice over ``values``; greedy ties go to the lowest index.

    One uniform is always drawn for the explore/exploit coin, plus one integer
    when exploring.
    """
    n = len(values)
    if n == 0:
        raise ValueError("cannot select from an empty action set")
    if rng.random() < eps:
        return int(rng.integers(n))
    return int(np.argmax(values))


def epsilon_step(eps: float, cfg: LearnerConfig) -> float:
    return max(cfg.eps_final, eps * cfg.eps_decay)
