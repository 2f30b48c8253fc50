"""Tabular Q-learning over the binary jam-indicator state."""

from __future__ import annotations

import numpy as np

from jamshield.agents.policy import LearnerConfig, epsilon_step, select_action


def new_qtable(n_actions: int, n_states: int = 2) -> np.ndarray:
    return np.zeros((n_states, n_actions))


def q_update(table: np.ndarray, s: int, a: int, r: float, s_next: int, alpha: float, gamma: float) -> np.ndarray:
    """One-step TD update of ``table[s, a]`` in place; returns ``table``."""
    target = r + gamma * table[s_next].max()
    table[s, a] += alpha * (target - table[s, a])
    return table


class QLearningAgent:
    def __init__(self, n_actions: int, cfg: LearnerConfig, n_states: int = 2):
        self.cfg = cfg
        self.q = new_qtable(n_actions, n_states)
        self.epsilon = cfg.eps_start

    def act(self, obs, t: int, rng: np.random.Generator) -> int:
        return select_action(self.q[int(obs)], self.epsilon, rng)

    def learn(self, s, a: int, r: float, s_next, done: int, rng: np.random.Generator) -> None:
        # The TD rule bootstraps through episode ends; ``done`` is unused here.
        q_update(self.q, int(s), a, r, int(s_next), self.cfg.alpha, self.cfg.gamma)

    def end_episode(self) -> None:
        self.epsilon = epsilon_step(self.epsilon, self.cfg)
