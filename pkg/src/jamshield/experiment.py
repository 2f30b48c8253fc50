"""Training loop, per-episode metrics and run summaries."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from jamshield.agents import DQNAgent, FixedAgent, LearnerConfig, QLearningAgent
from jamshield.environment import (
    CONTINUOUS,
    DISCRETE,
    SHANNON,
    THROUGHPUT,
    EnvConfig,
    JammingEnv,
    make_schedule,
)
from jamshield.jammer import JammerConfig
from jamshield.link import LinkGains, SUPPORTED_MODULATIONS, build_action_space

MOD_COLUMNS = tuple(f"mod{m}" for m in SUPPORTED_MODULATIONS)


@dataclass(frozen=True)
class MetricsRow:
    episode: int
    mean_reward: float
    jam_rate: float
    mean_power: float
    eps: float
    mod_counts: tuple = (0,) * len(SUPPORTED_MODULATIONS)


@dataclass
class RunSummary:
    preset: str
    seed: int
    episodes: int
    total_reward: float
    block_means: list = field(default_factory=list)
    wall_clock: float = 0.0
    config_digest: str = ""


def episode_streams(seed: int, episode: int):
    """Independent (environment, agent) generators for one episode."""
    return np.random.default_rng([seed, episode, 0]), np.random.default_rng([seed, episode, 1])


def learner_config(preset) -> LearnerConfig:
    return LearnerConfig(
        alpha=preset.alpha,
        gamma=preset.gamma,
        eps_start=preset.eps_start,
        eps_final=preset.eps_final,
        eps_decay=preset.eps_decay,
        eta=preset.eta,
        batch=preset.batch,
        buffer_capacity=preset.buffer_capacity,
        target_sync=preset.target_sync,
    )


def build_environment(preset) -> EnvConfig:
    channels = preset.channels
    modulations = () if preset.mode == "pc" else SUPPORTED_MODULATIONS
    space = build_action_space(preset.power_levels - 1, preset.p_max, modulations, tuple(range(channels)))
    jammer = JammerConfig(
        tau_low=preset.tau_low,
        tau_high=preset.tau_high,
        p_stay=preset.p_stay,
        q_stay=preset.q_stay,
        num_channels=channels,
        num_samples=preset.num_samples,
        noise_power=preset.sigma_j2,
        interference_power=preset.p_i,
    )
    gains = LinkGains(h_tr=1.0, sigma_r2=preset.sigma_r2, p_i=preset.p_i)
    return EnvConfig(
        gains=gains,
        jammer=jammer,
        schedule=make_schedule(preset.episodes),
        action_space=space,
        horizon=preset.horizon,
        observation_mode=CONTINUOUS if preset.observation == "continuous" else DISCRETE,
        reward_mode=SHANNON if preset.mode == "pc" else THROUGHPUT,
    )


def build_agent(preset, env_cfg: EnvConfig):
    n_actions = len(env_cfg.action_space)
    if preset.agent == "fixed":
        return FixedAgent(env_cfg.action_space, env_cfg.gains)
    cfg = learner_config(preset)
    if env_cfg.observation_mode == DISCRETE:
        return QLearningAgent(n_actions, cfg)
    g = env_cfg.gains
    scale = preset.p_max + g.p_i + g.sigma_r2
    init_rng = np.random.default_rng([preset.seed, 0, 2])
    return DQNAgent(n_actions, cfg, scale, init_rng)


def run_episode(env: JammingEnv, agent, episode: int, seed: int) -> MetricsRow:
    """Play one episode, learning online, and decay exploration afterwards."""
    env_rng, agent_rng = episode_streams(seed, episode)
    horizon = env.cfg.horizon
    eps0 = float(agent.epsilon)
    obs = env.reset(episode, env_rng)
    taken = np.empty(horizon, dtype=np.intp)
    reward_sum = 0.0
    jams = 0
    act, learn, step = agent.act, agent.learn, env.step
    for t in range(horizon):
        a = act(obs, t, agent_rng)
        out = step(a)
        learn(obs, a, out.reward, out.next_observation, out.episode_end, agent_rng)
        taken[t] = a
        reward_sum += out.reward
        jams += out.jam_indicator
        obs = out.next_observation
    agent.end_episode()

    space = env.space
    counts = np.bincount(taken, minlength=len(space)).reshape(len(space.channels), space.n_power, space.n_mod)
    per_power = counts.sum(axis=(0, 2))
    mean_power = float(np.dot(per_power, space.power_levels)) / horizon
    if space.modulations:
        per_mod = dict(zip(space.modulations, counts.sum(axis=(0, 1)).tolist()))
        mods = tuple(per_mod.get(m, 0) for m in SUPPORTED_MODULATIONS)
    else:
        mods = (0,) * len(SUPPORTED_MODULATIONS)
    return MetricsRow(episode, reward_sum / horizon, jams / horizon, mean_power, eps0, mods)


def summarize(preset, seed: int, rows, wall_clock: float = 0.0) -> RunSummary:
    schedule = make_schedule(preset.episodes)
    block_means = []
    for b in schedule.blocks:
        chunk = [r.mean_reward for r in rows[b.start:b.end]]
        block_means.append(math.fsum(chunk) / len(chunk) if chunk else float("nan"))
    return RunSummary(
        preset=preset.name,
        seed=seed,
        episodes=len(rows),
        total_reward=math.fsum(r.mean_reward for r in rows),
        block_means=block_means,
        wall_clock=wall_clock,
        config_digest=preset.digest(),
    )


def run_experiment(preset, seed=None, progress=None):
    """Train (or play the baseline) for every episode of ``preset``.

    Returns:
        ``(rows, summary)`` with one :class:`MetricsRow` per episode.
    """
    seed = preset.seed if seed is None else int(seed)
    env_cfg = build_environment(preset)
    env = JammingEnv(env_cfg)
    agent = build_agent(replace(preset, seed=seed), env_cfg)
    start = time.perf_counter()
    rows = []
    for episode in range(preset.episodes):
        rows.append(run_episode(env, agent, episode, seed))
        if progress is not None:
            progress(episode, rows[-1])
    return rows, summarize(preset, seed, rows, time.perf_counter() - start)

