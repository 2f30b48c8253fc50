import math

import numpy as np
import pytest

from jamshield.errors import ConfigurationError
from jamshield.jammer import (
    JammerConfig,
    JammerState,
    initial_state,
    jam_decision,
    multichannel_transition,
    threshold_for_slot,
)

CFG = JammerConfig()
CFG2 = JammerConfig(num_channels=2)


def test_threshold_switching():
    assert threshold_for_slot(1, CFG) == 0.4
    assert threshold_for_slot(0, CFG) == 0.2
    assert [threshold_for_slot(j, CFG) for j in (0, 0, 1)] == [0.2, 0.2, 0.4]


def test_threshold_closed_form():
    for j in (0, 1):
        assert threshold_for_slot(j, CFG) == j * CFG.tau_high + (1 - j) * CFG.tau_low


def test_jam_decision_certain_outcomes():
    rng = np.random.default_rng(0)
    assert all(jam_decision(rng, 1.0) == 1 for _ in range(1000))
    assert all(jam_decision(rng, 0.0) == 0 for _ in range(1000))


def test_jam_decision_fair_coin():
    rng = np.random.default_rng(1)
    n = 1_000_000
    mean = sum(jam_decision(rng, 0.5) for _ in range(n)) / n
    assert abs(mean - 0.5) <= 0.0015


def test_jam_decision_is_reproducible():
    a = [jam_decision(np.random.default_rng(3), 0.3) for _ in range(5)]
    b = [jam_decision(np.random.default_rng(3), 0.3) for _ in range(5)]
    assert a == b


def _stay_frequency(d, trials=100_000, seed=0):
    rng = np.random.default_rng(seed)
    stays, taus = 0, {True: set(), False: set()}
    for _ in range(trials):
        new = multichannel_transition(rng, JammerState(0, CFG2.tau_low, 0), d, CFG2)
        stayed = new.channel == 0
        stays += stayed
        taus[stayed].add(new.tau)
        assert new.prev_outcome == d
    return stays / trials, taus


def test_stay_after_jamming():
    freq, taus = _stay_frequency(1)
    assert abs(freq - 0.8) <= 0.004
    assert taus[True] == {0.4}
    assert taus[False] == {0.2}


def test_move_after_idle():
    freq, taus = _stay_frequency(0, seed=1)
    assert abs((1 - freq) - 0.8) <= 0.004
    assert taus[False] == {0.4}
    assert taus[True] == {0.2}


def test_forced_move_between_two_channels():
    cfg = JammerConfig(num_channels=2, q_stay=0.0)
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert multichannel_transition(rng, JammerState(0, 0.2, 0), 0, cfg).channel == 1


def test_uniform_move_over_many_channels():
    cfg = JammerConfig(num_channels=4, q_stay=0.0)
    rng = np.random.default_rng(0)
    counts = np.zeros(4)
    n = 60_000
    for _ in range(n):
        counts[multichannel_transition(rng, JammerState(0, 0.2, 2), 0, cfg).channel] += 1
    assert counts[2] == 0
    for c in (0, 1, 3):
        assert abs(counts[c] / n - 1 / 3) <= 3 * math.sqrt(2 / 9 / n) + 1e-3


@pytest.mark.parametrize("d_seq_seed", [0, 1, 2])
def test_transition_matrix_converges(d_seq_seed):
    rng = np.random.default_rng(d_seq_seed)
    d_seq = rng.integers(2, size=200_000)
    state = JammerState(0, 0.2, 0)
    stays = {0: [0, 0], 1: [0, 0]}
    thresholds = set()
    for d in d_seq:
        new = multichannel_transition(rng, state, int(d), CFG2)
        stays[int(d)][0] += new.channel == state.channel
        stays[int(d)][1] += 1
        thresholds.add(new.tau)
        state = new
    for d, p in ((1, 0.8), (0, 0.2)):
        n = stays[d][1]
        assert abs(stays[d][0] / n - p) <= 3 * math.sqrt(p * (1 - p) / n)
    assert thresholds <= {0.2, 0.4}


def test_initial_state():
    assert initial_state(CFG) == JammerState(0, 0.2, 0)
    rng = np.random.default_rng(5)
    channels = [initial_state(CFG2, rng).channel for _ in range(4000)]
    assert set(channels) == {0, 1}
    assert abs(np.mean(channels) - 0.5) < 0.05


@pytest.mark.parametrize(
    "kwargs",
    [dict(tau_low=0.5, tau_high=0.4), dict(p_stay=0.4), dict(q_stay=0.6), dict(num_channels=0), dict(noise_power=-1)],
)
def test_config_invariants(kwargs):
    with pytest.raises(ConfigurationError):
        JammerConfig(**kwargs)
