"""Reactive jammer state machines.

Two update rules share :class:`JammerState`:

* single channel: the sensing threshold for a slot follows the previous
  jamming decision (high after jamming, low otherwise);
* multiple channels: after each slot the jammer stays on its channel or hops,
  with a stay probability and a next threshold that depend on whether it
  jammed the transmitter on its own channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from jamshield.detector import DetectorParams
from jamshield.errors import ConfigurationError


@dataclass(frozen=True)
class JammerConfig:
    tau_low: float = 0.2
    tau_high: float = 0.4
    p_stay: float = 0.8
    q_stay: float = 0.2
    num_channels: int = 1
    num_samples: int = 1
    noise_power: float = 0.0
    interference_power: float = 100.0

    def __post_init__(self):
        if not 0 < self.tau_low < self.tau_high:
            raise ConfigurationError(
                f"need 0 < tau_low < tau_high, got {self.tau_low}, {self.tau_high}", key="tau_low"
            )
        if not 0.5 < self.p_stay <= 1:
            raise ConfigurationError(f"p_stay must lie in (0.5, 1], got {self.p_stay}", key="p_stay")
        if not 0 <= self.q_stay < 0.5:
            raise ConfigurationError(f"q_stay must lie in [0, 0.5), got {self.q_stay}", key="q_stay")
        if int(self.num_channels) != self.num_channels or self.num_channels < 1:
            raise ConfigurationError(
                f"num_channels must be a positive integer, got {self.num_channels}",
                key="num_channels",
            )
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise ConfigurationError(
                f"num_samples must be a positive integer, got {self.num_samples}", key="num_samples"
            )
        if not self.noise_power >= 0:
            raise ConfigurationError(f"sigma_j2 must be >= 0, got {self.noise_power}", key="sigma_j2")
        if not self.interference_power >= 0:
            raise ConfigurationError(f"p_i must be >= 0, got {self.interference_power}", key="p_i")

    def detector(self, tau: float) -> DetectorParams:
        return DetectorParams(self.num_samples, self.noise_power, tau)


@dataclass
class JammerState:
    """What the jammer remembers between slots.

    ``prev_outcome`` is the last jamming decision in the single-channel rule and
    the last on-link jamming indicator in the multi-channel rule.  ``tau`` is the
    threshold the jammer will sense with in the coming slot.
    """

    prev_outcome: int = 0
    tau: float = 0.2
    channel: int = field(default=0)


def initial_state(cfg: JammerConfig, rng: np.random.Generator | None = None) -> JammerState:
    """Episode-start jammer: no prior jam, low threshold, uniform channel."""
    channel = 0
    if cfg.num_channels > 1:
        if rng is None:
            raise ValueError("a random stream is required to place a multi-channel jammer")
        channel = int(rng.integers(cfg.num_channels))
    return JammerState(prev_outcome=0, tau=cfg.tau_low, channel=channel)


def threshold_for_slot(prev_jammed: int, cfg: JammerConfig) -> float:
    return cfg.tau_high if prev_jammed else cfg.tau_low


def jam_decision(rng: np.random.Generator, p_d: float) -> int:
    """Bernoulli(p_d) draw; always consumes exactly one uniform from ``rng``."""
    return int(rng.random() < p_d)


def multichannel_transition(
    rng: np.random.Generator, state: JammerState, d_t: int, cfg: JammerConfig
) -> JammerState:
    """Move the multi-channel jammer to its next channel and threshold.

    Args:
        rng: Random stream owned by the environment.
        state: Jammer state during the slot just played.
        d_t: 1 if the jammer jammed the transmitter on its channel this slot.
        cfg: Jammer parameters.

    Returns:
        A new state; ``state`` is left untouched.
    """
    stay_prob = cfg.p_stay if d_t else cfg.q_stay
    stay = cfg.num_channels < 2 or rng.random() < stay_prob
    if stay:
        channel = state.channel
        tau = cfg.tau_high if d_t else cfg.tau_low
    else:
        if cfg.num_channels == 2:
            channel = 1 - state.channel
        else:
            pick = int(rng.integers(cfg.num_channels - 1))
            channel = pick if pick < state.channel else pick + 1
        tau = cfg.tau_low if d_t else cfg.tau_high
    return replace(state, prev_outcome=int(d_t), tau=tau, channel=channel)
