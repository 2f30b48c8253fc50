"""Non-adaptive reference transmitter."""

from __future__ import annotations

from jamshield.link import ActionSpace, LinkGains, best_fixed_modulation


class FixedAgent:
    """Full power, the modulation that is best when unjammed, and a channel that alternates every slot."""

    epsilon = 0.0

    def __init__(self, space: ActionSpace, gains: LinkGains):
        self.space = space
        self.power_index = space.n_power - 1
        self.modulation = (
            best_fixed_modulation(space.power_levels[-1], gains, space.modulations)
            if space.modulations
            else None
        )

    def action_for_slot(self, t: int) -> int:
        channel = self.space.channels[t % len(self.space.channels)]
        return self.space.encode(channel, self.power_index, self.modulation)

    def act(self, obs, t: int, rng=None) -> int:
        return self.action_for_slot(t)

    def learn(self, *args) -> None:
        pass

    def end_episode(self) -> None:
        pass


def fixed_baseline(space: ActionSpace, gains: LinkGains, horizon: int) -> list:
    """Action indices the baseline plays over one episode."""
    agent = FixedAgent(space, gains)
    return [agent.action_for_slot(t) for t in range(horizon)]
