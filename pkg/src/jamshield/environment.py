"""Slotted transmitter-vs-jammer environments.

One :class:`JammingEnv` covers the single-channel power-control (PC), single
channel power control + adaptive modulation (PCAM) and multi-channel PCAM
settings, with either the binary jam indicator or the received power as the
observation.  Within a slot the jammer senses, decides, the reward is scored,
then the jammer updates its threshold (and channel).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from jamshield.detector import detection_probability
from jamshield.errors import ConfigurationError
from jamshield.jammer import (
    JammerConfig,
    JammerState,
    initial_state,
    jam_decision,
    multichannel_transition,
    threshold_for_slot,
)
from jamshield.link import ActionSpace, LinkGains, action_rewards

DISCRETE = "discrete"
CONTINUOUS = "continuous"
SHANNON = "shannon"
THROUGHPUT = "throughput"

# (h_tj, h_jr) for the jammer near the transmitter and near the receiver.
POSITION_NEAR_TX = (1.0, 0.5)
POSITION_NEAR_RX = (0.5, 1.0)
_PAIRED_H_JR = {POSITION_NEAR_TX[0]: POSITION_NEAR_TX[1], POSITION_NEAR_RX[0]: POSITION_NEAR_RX[1]}


@dataclass(frozen=True)
class GainBlock:
    start: int
    end: int
    h_tj: float
    h_jr: float


@dataclass(frozen=True)
class GainSchedule:
    blocks: tuple

    def __post_init__(self):
        expected = 0
        for b in self.blocks:
            if b.start != expected or b.end < b.start:
                raise ConfigurationError("gain schedule blocks must tile [0, E) in order", key="episodes")
            if (b.h_tj, b.h_jr) not in (POSITION_NEAR_TX, POSITION_NEAR_RX):
                raise ConfigurationError(
                    f"(h_tj, h_jr) = ({b.h_tj}, {b.h_jr}) is not a jammer position", key="episodes"
                )
            expected = b.end

    @property
    def total_episodes(self) -> int:
        return self.blocks[-1].end if self.blocks else 0

    @property
    def boundaries(self) -> list:
        """Episode indices where a new block starts (excluding 0)."""
        return [b.start for b in self.blocks[1:]]

    def block_index(self, episode: int) -> int:
        for i, b in enumerate(self.blocks):
            if b.start <= episode < b.end:
                return i
        raise ConfigurationError(
            f"episode {episode} outside schedule [0, {self.total_episodes})", key="episodes"
        )


def make_schedule(total_episodes: int, h_tj_pattern=(0.5, 1.0, 0.5, 1.0)) -> GainSchedule:
    """Split ``total_episodes`` into equal consecutive blocks, one per pattern entry.

    Block ``i`` covers ``[i*E//n, (i+1)*E//n)``; empty blocks are dropped.
    """
    if total_episodes < 0:
        raise ConfigurationError("episodes must be >= 0", key="episodes")
    n = len(h_tj_pattern)
    blocks = []
    for i, h_tj in enumerate(h_tj_pattern):
        if h_tj not in _PAIRED_H_JR:
            raise ConfigurationError(f"h_tj={h_tj} is not a jammer position", key="episodes")
        start, end = i * total_episodes // n, (i + 1) * total_episodes // n
        if end > start:
            blocks.append(GainBlock(start, end, float(h_tj), _PAIRED_H_JR[h_tj]))
    return GainSchedule(tuple(blocks))


def gain_schedule_lookup(schedule: GainSchedule, episode: int) -> tuple:
    block = schedule.blocks[schedule.block_index(episode)]
    return block.h_tj, block.h_jr


@dataclass(frozen=True)
class EnvConfig:
    """Physics and schedule of one scenario.

    ``gains`` carries ``h_tr``, ``sigma_r2`` and ``p_i``; its ``h_tj``/``h_jr``
    are overridden per episode from ``schedule``.
    """

    gains: LinkGains
    jammer: JammerConfig
    schedule: GainSchedule
    action_space: ActionSpace
    horizon: int = 200
    observation_mode: str = DISCRETE
    reward_mode: str = SHANNON

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}", key="horizon")
        if self.observation_mode not in (DISCRETE, CONTINUOUS):
            raise ConfigurationError(f"unknown observation mode {self.observation_mode!r}", key="observation")
        if self.reward_mode not in (SHANNON, THROUGHPUT):
            raise ConfigurationError(f"unknown reward mode {self.reward_mode!r}", key="mode")
        if self.reward_mode == SHANNON and self.action_space.modulations:
            raise ConfigurationError("Shannon reward requires a power-only action space", key="mode")
        if self.reward_mode == THROUGHPUT and not self.action_space.modulations:
            raise ConfigurationError("throughput reward requires modulation actions", key="mode")
        if len(self.action_space.channels) != self.jammer.num_channels:
            raise ConfigurationError(
                "action space channels must match the jammer's channel count", key="num_channels"
            )

    @property
    def multi_channel(self) -> bool:
        return self.jammer.num_channels > 1


@dataclass(frozen=True, slots=True)
class StepOutcome:
    reward: float
    jam_indicator: int
    received_power: float
    next_observation: float
    episode_end: int
    jammed: int = 0
    """Raw jamming decision ``J_t`` (differs from ``jam_indicator`` off-channel)."""


def observe(outcome: StepOutcome, mode: str):
    """Observation handed to the agent for choosing its next action."""
    if mode == DISCRETE:
        return outcome.jam_indicator
    if mode == CONTINUOUS:
        return outcome.received_power
    raise ConfigurationError(f"unknown observation mode {mode!r}", key="observation")


@dataclass
class _BlockTables:
    gains: LinkGains
    rewards: tuple = field(default=())


class JammingEnv:
    """Stateful environment for one scenario; owns no randomness of its own.

    Each episode is started with :meth:`reset`, which receives the random
    stream used for every jammer draw until the next reset.
    """

    def __init__(self, cfg: EnvConfig):
        self.cfg = cfg
        self.space = cfg.action_space
        self._decoded = [self.space.decode(i) for i in range(len(self.space))]
        self._tables: dict = {}
        self.jammer: Optional[JammerState] = None
        self.gains: Optional[LinkGains] = None
        self.t = 0
        self._rng: Optional[np.random.Generator] = None
        self._rewards = None

    def _block_tables(self, h_tj: float, h_jr: float) -> _BlockTables:
        key = (h_tj, h_jr)
        if key not in self._tables:
            base = self.cfg.gains
            gains = LinkGains(base.h_tr, h_tj, h_jr, base.sigma_r2, base.p_i)
            # rewards[j][a]: reward of action a when jammed-on-link flag is j
            rewards = (
                tuple(action_rewards(self.space, gains, 0)),
                tuple(action_rewards(self.space, gains, 1)),
            )
            self._tables[key] = _BlockTables(gains, rewards)
        return self._tables[key]

    def reset(self, episode: int, rng: np.random.Generator):
        h_tj, h_jr = gain_schedule_lookup(self.cfg.schedule, episode)
        tables = self._block_tables(h_tj, h_jr)
        self.gains = tables.gains
        self._rewards = tables.rewards
        self._rng = rng
        self.jammer = initial_state(self.cfg.jammer, rng)
        self.t = 0
        if self.cfg.observation_mode == DISCRETE:
            return 0
        return self.gains.sigma_r2

    def step(self, action: int) -> StepOutcome:
        if self.jammer is None:
            raise RuntimeError("reset() must be called before step()")
        if self.cfg.multi_channel:
            return self.step_multi_channel(action)
        return self.step_single_channel(action)

    def _finish(self, action: int, power: float, jammed: int, on_link: int) -> StepOutcome:
        g = self.gains
        reward = self._rewards[on_link][action]
        received = g.h_tr * power + (g.h_jr * g.p_i if on_link else 0.0) + g.sigma_r2
        end = int(self.t == self.cfg.horizon - 1)
        self.t += 1
        obs = on_link if self.cfg.observation_mode == DISCRETE else received
        return StepOutcome(reward, on_link, received, obs, end, jammed)

    def step_single_channel(self, action: int) -> StepOutcome:
        _, power, _ = self._decoded[action]
        jcfg = self.cfg.jammer
        tau = threshold_for_slot(self.jammer.prev_outcome, jcfg)
        p_d = detection_probability(power, self.gains.h_tj, jcfg.detector(tau))
        jammed = jam_decision(self._rng, p_d)
        self.jammer.prev_outcome = jammed
        self.jammer.tau = threshold_for_slot(jammed, jcfg)
        return self._finish(action, power, jammed, jammed)

    def step_multi_channel(self, action: int) -> StepOutcome:
        channel, power, _ = self._decoded[action]
        jcfg = self.cfg.jammer
        state = self.jammer
        same = channel == state.channel
        sensed = power if same else 0.0
        p_d = detection_probability(sensed, self.gains.h_tj, jcfg.detector(state.tau))
        jammed = jam_decision(self._rng, p_d)
        d_t = int(same and jammed)
        self.jammer = multichannel_transition(self._rng, state, d_t, jcfg)
        return self._finish(action, power, jammed, d_t)
