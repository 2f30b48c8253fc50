"""Link budget, reward models and the transmitter's action space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from jamshield.detector import gaussian_q
from jamshield.errors import ConfigurationError

SUPPORTED_MODULATIONS = (2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class LinkGains:
    h_tr: float = 1.0
    h_tj: float = 0.5
    h_jr: float = 1.0
    sigma_r2: float = 0.1
    p_i: float = 100.0

    def __post_init__(self):
        for name in ("h_tr", "h_tj", "h_jr", "p_i"):
            if not getattr(self, name) >= 0:
                raise ConfigurationError(f"{name} must be >= 0", key=name)
        if not self.sigma_r2 > 0:
            raise ConfigurationError("sigma_r2 must be > 0", key="sigma_r2")


class Action(NamedTuple):
    channel: int
    power: float
    modulation: Optional[int]


@dataclass(frozen=True)
class ActionSpace:
    """Cartesian product of channels x power levels x modulations.

    Enumeration is channel-major, then power, then modulation.  An empty
    ``modulations`` tuple means power control only (Shannon reward).
    """

    power_levels: tuple
    modulations: tuple
    channels: tuple

    @property
    def n_power(self) -> int:
        return len(self.power_levels)

    @property
    def n_mod(self) -> int:
        return max(1, len(self.modulations))

    def __len__(self) -> int:
        return len(self.channels) * self.n_power * self.n_mod

    def decode(self, index: int) -> Action:
        if not 0 <= index < len(self):
            raise IndexError(f"action index {index} out of range [0, {len(self)})")
        rest, m = divmod(index, self.n_mod)
        c, k = divmod(rest, self.n_power)
        modulation = self.modulations[m] if self.modulations else None
        return Action(self.channels[c], self.power_levels[k], modulation)

    def encode(self, channel: int, power_index: int, modulation: Optional[int] = None) -> int:
        c = self.channels.index(channel)
        m = self.modulations.index(modulation) if self.modulations else 0
        if not 0 <= power_index < self.n_power:
            raise IndexError(f"power index {power_index} out of range")
        return (c * self.n_power + power_index) * self.n_mod + m

    @property
    def actions(self) -> list:
        return [self.decode(i) for i in range(len(self))]


def build_action_space(
    K: int, p_max: float, modulations: Sequence[int] = (), channels: Sequence[int] = (0,)
) -> ActionSpace:
    """Uniform power grid ``P_k = p_max * k / K`` for ``k = 0..K`` crossed with the other choices."""
    if int(K) != K or K < 1:
        raise ConfigurationError(f"K must be a positive integer, got {K}", key="power_levels")
    if not p_max > 0:
        raise ConfigurationError(f"p_max must be > 0, got {p_max}", key="p_max")
    bad = [m for m in modulations if m not in SUPPORTED_MODULATIONS]
    if bad:
        raise ConfigurationError(f"unsupported modulation order(s) {bad}", key="modulations")
    if not channels:
        raise ConfigurationError("at least one channel is required", key="num_channels")
    # k / K first keeps the default grid (p_max = 1) on the exact k/100 values.
    powers = tuple(p_max * (k / K) for k in range(K + 1))
    return ActionSpace(powers, tuple(modulations), tuple(channels))


def sinr(p_t: float, gains: LinkGains, jammed_on_link: int) -> float:
    signal = gains.h_tr * p_t
    if jammed_on_link:
        return signal / (gains.h_jr * gains.p_i + gains.sigma_r2)
    return signal / gains.sigma_r2


def shannon_reward(s: float) -> float:
    return math.log2(1.0 + s)


def qam_ber(m: int, s: float) -> float:
    """Approximate bit error rate of M-QAM at linear SINR ``s``.

    BPSK uses ``Q(sqrt(2s))``; every other order uses the nearest-neighbour
    square-QAM expression ``4/log2(m) * (1 - 1/sqrt(m)) * Q(sqrt(3s/(m-1)))``
    with a real-valued ``sqrt(m)`` (so 8 and 32 are treated the same way).
    The result is clamped to ``[0, 0.5]``.
    """
    if m not in SUPPORTED_MODULATIONS:
        raise ConfigurationError(f"unsupported modulation order {m}", key="modulations")
    if math.isinf(s):
        return 0.0
    if m == 2:
        ber = gaussian_q(math.sqrt(2.0 * s))
    else:
        ber = 4.0 / math.log2(m) * (1.0 - 1.0 / math.sqrt(m)) * gaussian_q(math.sqrt(3.0 * s / (m - 1)))
    return min(0.5, max(0.0, ber))


def throughput_reward(m: int, s: float) -> float:
    return math.log2(m) * (1.0 - qam_ber(m, s))


def best_fixed_modulation(p_max: float, gains: LinkGains, modulations: Sequence[int]) -> int:
    """Modulation a non-adaptive transmitter commits to: best throughput at full power, unjammed."""
    s = sinr(p_max, gains, 0)
    best = None
    for m in modulations:
        value = throughput_reward(m, s)
        if best is None or value > best[0]:
            best = (value, m)
    if best is None:
        raise ConfigurationError("no modulation orders to choose from", key="modulations")
    return best[1]


def action_rewards(space: ActionSpace, gains: LinkGains, jammed_on_link: int) -> list:
    """Reward of every action index under one jamming outcome (lookup-table helper)."""
    out = []
    for _, p, m in (space.decode(i) for i in range(len(space))):
        s = sinr(p, gains, jammed_on_link)
        out.append(shannon_reward(s) if m is None else throughput_reward(m, s))
    return out


__all__ = [
    "Action",
    "ActionSpace",
    "LinkGains",
    "SUPPORTED_MODULATIONS",
    "action_rewards",
    "best_fixed_modulation",
    "build_action_space",
    "qam_ber",
    "shannon_reward",
    "sinr",
    "throughput_reward",
]
