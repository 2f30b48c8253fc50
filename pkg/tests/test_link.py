import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from jamshield.errors import ConfigurationError
from jamshield.link import (
    SUPPORTED_MODULATIONS,
    LinkGains,
    best_fixed_modulation,
    build_action_space,
    qam_ber,
    shannon_reward,
    sinr,
    throughput_reward,
)


def q_quad(x):
    val, _ = integrate.quad(lambda u: math.exp(-u * u / 2) / math.sqrt(2 * math.pi), x, math.inf, epsabs=1e-15)
    return val


def test_power_control_space():
    space = build_action_space(100, 1.0, (), (0,))
    assert len(space) == 101
    assert space.power_levels[0] == 0.0 and space.power_levels[100] == 1.0
    assert space.decode(19).power == 0.19


def test_pcam_and_multichannel_sizes():
    assert len(build_action_space(100, 1.0, SUPPORTED_MODULATIONS, (0,))) == 101 * 6
    assert len(build_action_space(100, 1.0, SUPPORTED_MODULATIONS, (0, 1))) == 2 * 101 * 6


def test_enumeration_order_is_channel_power_modulation():
    space = build_action_space(2, 1.0, (2, 4), (0, 1))
    assert [tuple(a) for a in space.actions[:5]] == [(0, 0.0, 2), (0, 0.0, 4), (0, 0.5, 2), (0, 0.5, 4), (0, 1.0, 2)]
    assert tuple(space.decode(6)) == (1, 0.0, 2)


def test_round_trip_all_indices():
    space = build_action_space(100, 1.0, SUPPORTED_MODULATIONS, (0, 1))
    for i in range(len(space)):
        c, _, m = space.decode(i)
        k = i // space.n_mod % space.n_power
        assert space.encode(c, k, m) == i


def test_power_grid_uniform():
    space = build_action_space(100, 1.0)
    assert np.allclose(np.diff(space.power_levels), 0.01, atol=1e-15)


def test_unsupported_modulation():
    with pytest.raises(ConfigurationError):
        build_action_space(10, 1.0, (3,))
    with pytest.raises(ConfigurationError):
        qam_ber(128, 1.0)


def test_sinr_cases():
    g = LinkGains(h_tr=1.0, h_jr=1.0, sigma_r2=0.1, p_i=100.0)
    assert sinr(1.0, g, 1) == pytest.approx(1 / 100.1, rel=1e-15)
    assert sinr(0.19, g, 0) == pytest.approx(1.9, rel=1e-15)
    assert sinr(0.0, g, 1) == 0.0 and sinr(0.0, g, 0) == 0.0


@given(st.floats(1e-3, 1), st.floats(1e-3, 200), st.floats(1e-3, 1))
def test_jamming_lowers_sinr(p, p_i, h_jr):
    g = LinkGains(h_jr=h_jr, p_i=p_i)
    assert sinr(p, g, 1) < sinr(p, g, 0)


def test_shannon_reward():
    assert shannon_reward(0.0) == 0.0
    assert shannon_reward(3.0) == 2.0
    ref = float(mpmath.log(1 + mpmath.mpf(1) / mpmath.mpf("100.1"), 2))
    assert ref == pytest.approx(0.014341, abs=1e-6)
    assert shannon_reward(1 / 100.1) == pytest.approx(ref, abs=1e-15)


def test_qam_ber_reference_points():
    assert qam_ber(2, 2.0) == pytest.approx(q_quad(2.0), abs=1e-12)
    assert qam_ber(2, 2.0) == pytest.approx(0.02275, abs=1e-6)
    # square 4-QAM reduces to Q(sqrt(s))
    assert qam_ber(4, 1.0) == pytest.approx(q_quad(1.0), abs=1e-12)
    assert qam_ber(4, 1.0) == pytest.approx(0.158655, abs=1e-6)
    assert qam_ber(4, 2.0) == pytest.approx(q_quad(math.sqrt(2.0)), abs=1e-12)


def test_qam_ber_limits():
    for m in SUPPORTED_MODULATIONS:
        assert qam_ber(m, math.inf) == 0.0
        assert qam_ber(m, 1e6) < 1e-12
        assert 0.0 < qam_ber(m, 0.0) <= 0.5
    assert qam_ber(2, 0.0) == 0.5


@pytest.mark.parametrize("m", SUPPORTED_MODULATIONS)
def test_qam_ber_monotone_in_sinr(m):
    values = [qam_ber(m, s) for s in np.linspace(0, 100, 1000)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_qam_ber_zero_sinr_prefactors():
    # at zero SINR the BER is the constant prefactor times Q(0) = 1/2
    for m in SUPPORTED_MODULATIONS[1:]:
        expected = 0.5 * 4 / math.log2(m) * (1 - 1 / math.sqrt(m))
        assert qam_ber(m, 0.0) == pytest.approx(expected, rel=1e-14)


@given(st.floats(20, 1e3))
def test_higher_order_errs_more_at_high_sinr(s):
    values = [qam_ber(m, s) for m in SUPPORTED_MODULATIONS]
    assert all(b >= a for a, b in zip(values[1:], values[2:]))


def test_throughput_reward_points():
    assert throughput_reward(2, math.inf) == 1.0
    assert throughput_reward(64, math.inf) == 6.0
    assert throughput_reward(4, 1.0) == pytest.approx(2 * (1 - q_quad(1.0)), abs=1e-12)
    assert throughput_reward(4, 2.0) == pytest.approx(2 * (1 - q_quad(math.sqrt(2.0))), abs=1e-12)


@given(st.sampled_from(SUPPORTED_MODULATIONS), st.floats(0, 1e4))
def test_throughput_bounds(m, s):
    r = throughput_reward(m, s)
    assert math.log2(m) / 2 <= r <= math.log2(m)


def test_best_fixed_modulation_by_enumeration():
    g = LinkGains(sigma_r2=0.1)
    s = 1.0 / 0.1
    scores = {m: math.log2(m) * (1 - min(0.5, _ber_reference(m, s))) for m in SUPPORTED_MODULATIONS}
    assert best_fixed_modulation(1.0, g, SUPPORTED_MODULATIONS) == max(scores, key=scores.get)


def _ber_reference(m, s):
    if m == 2:
        return q_quad(math.sqrt(2 * s))
    return 4 / math.log2(m) * (1 - 1 / math.sqrt(m)) * q_quad(math.sqrt(3 * s / (m - 1)))
