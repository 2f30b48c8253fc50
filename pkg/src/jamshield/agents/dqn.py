"""Deep Q-network agent for the received-power observation."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from jamshield.agents.mlp import (
    MlpParams,
    bellman_loss_and_grad,
    init_mlp,
    mlp_forward,
    sgd_step,
)
from jamshield.agents.policy import LearnerConfig, epsilon_step
from jamshield.errors import TrainingDivergenceError


class Transitions(NamedTuple):
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray


class ReplayBuffer:
    """Fixed-capacity ring of transitions; the oldest entry is overwritten first."""

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self.states = np.zeros(self.capacity)
        self.actions = np.zeros(self.capacity, dtype=np.intp)
        self.rewards = np.zeros(self.capacity)
        self.next_states = np.zeros(self.capacity)
        self.dones = np.zeros(self.capacity)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, s, a, r, s_next, done) -> None:
        i = self._next
        self.states[i] = s
        self.actions[i] = a
        self.rewards[i] = r
        self.next_states[i] = s_next
        self.dones[i] = done
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def contents(self) -> Transitions:
        """Stored transitions, oldest first."""
        if self._size < self.capacity:
            order = np.arange(self._size)
        else:
            order = (np.arange(self.capacity) + self._next) % self.capacity
        return self._gather(order)

    def _gather(self, idx) -> Transitions:
        return Transitions(
            self.states[idx], self.actions[idx], self.rewards[idx], self.next_states[idx], self.dones[idx]
        )

    def sample(self, rng: np.random.Generator, batch: int) -> Transitions:
        """Uniform draw with replacement."""
        if self._size < batch:
            raise ValueError(f"buffer holds {self._size} transitions, need {batch}")
        return self._gather(rng.integers(self._size, size=batch))


def td_targets(batch: Transitions, target_params: MlpParams, gamma: float, max_next=None) -> np.ndarray:
    """``r + gamma * (1 - e) * max_a' Q(s', a'; target)`` for each sample.

    ``max_next``, when given, maps the next-state array to the per-sample
    maximum target value and replaces the network evaluation.
    """
    if max_next is None:
        best = mlp_forward(target_params, batch.next_states).max(axis=1)
    else:
        best = max_next(batch.next_states)
    return batch.rewards + gamma * (1.0 - batch.dones) * best


class _TargetMaxCache:
    """Memoized ``max_a' Q(s', a'; target)`` keyed by the exact state value.

    Received power takes few distinct values, and the target network is frozen
    between syncs, so caching is exact.  Must be cleared on every sync.
    """

    def __init__(self, params: MlpParams):
        self.params = params
        self.values: dict = {}

    def clear(self) -> None:
        self.values.clear()

    def __call__(self, next_states: np.ndarray) -> np.ndarray:
        values = self.values
        missing = [s for s in set(next_states.tolist()) if s not in values]
        if missing:
            best = mlp_forward(self.params, np.array(missing)).max(axis=1)
            values.update(zip(missing, best.tolist()))
        return np.array([values[s] for s in next_states.tolist()])


def dqn_learn_step(
    params: MlpParams,
    target_params: MlpParams,
    buffer: ReplayBuffer,
    cfg: LearnerConfig,
    rng: np.random.Generator,
    step: int,
    max_next=None,
) -> tuple:
    """One minibatch SGD step on the mean-squared Bellman error.

    ``step`` is the number of gradient steps taken before this one; the target
    network is refreshed from ``params`` after every ``cfg.target_sync``-th step.

    Returns:
        ``(loss, synced)``.
    """
    batch = buffer.sample(rng, cfg.batch)
    y = td_targets(batch, target_params, cfg.gamma, max_next)
    loss, grad = bellman_loss_and_grad(params, batch.states, batch.actions, y)
    sgd_step(params, grad, cfg.eta)
    synced = (step + 1) % cfg.target_sync == 0
    if synced:
        if not params.all_finite():
            raise TrainingDivergenceError(f"non-finite network parameters at gradient step {step + 1}")
        params.copy_into(target_params)
    return loss, synced


class DQNAgent:
    """Epsilon-greedy DQN with replay and a periodically synced target network.

    States are divided by ``state_scale`` before entering the network.
    """

    def __init__(self, n_actions: int, cfg: LearnerConfig, state_scale: float, init_rng: np.random.Generator):
        self.cfg = cfg
        self.state_scale = float(state_scale)
        self.params = init_mlp([1, *cfg.hidden, n_actions], init_rng)
        self.target = self.params.copy()
        self.buffer = ReplayBuffer(cfg.buffer_capacity)
        self.epsilon = cfg.eps_start
        self.grad_steps = 0
        self.last_loss = float("nan")
        self._target_max = _TargetMaxCache(self.target)

    def values(self, obs) -> np.ndarray:
        return mlp_forward(self.params, float(obs) / self.state_scale)

    def act(self, obs, t: int, rng: np.random.Generator) -> int:
        # The coin is drawn first so exploring slots skip the forward pass.
        n = self.params.weights[-1].shape[1]
        if rng.random() < self.epsilon:
            return int(rng.integers(n))
        return int(np.argmax(self.values(obs)))

    def learn(self, s, a: int, r: float, s_next, done: int, rng: np.random.Generator) -> None:
        scale = self.state_scale
        self.buffer.push(s / scale, a, r, s_next / scale, done)
        if len(self.buffer) < self.cfg.batch:
            return
        self.last_loss, synced = dqn_learn_step(
            self.params, self.target, self.buffer, self.cfg, rng, self.grad_steps, self._target_max
        )
        self.grad_steps += 1
        if synced:
            self._target_max.clear()

    def end_episode(self) -> None:
        self.epsilon = epsilon_step(self.epsilon, self.cfg)


__all__ = [
    "DQNAgent",
    "ReplayBuffer",
    "Transitions",
    "dqn_learn_step",
    "td_targets",
]
