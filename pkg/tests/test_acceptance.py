"""End-to-end acceptance checks.

Criteria 4 to 6 train agents and take tens of minutes in total on one core.
A summary line per criterion is printed at the end of the session.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from jamshield.config import DESK_EPISODES, get_preset
from jamshield.detector import DetectorParams, detection_probability, noncentral_chi2_sf
from jamshield.experiment import run_experiment
from jamshield.verify import (
    check_detection_monte_carlo,
    check_gradient,
    check_jammer_stay,
    check_q_update,
    check_td_targets,
)

pytestmark = pytest.mark.slow

SEEDS = (0, 1, 2)


def _grid_optimum(h_tj, tau_low=0.2, sigma_r2=0.1):
    """Best constant-power Shannon rate that never trips the deterministic detector."""
    best = 0.0
    for k in range(101):
        p = k / 100
        if p * h_tj < tau_low:
            best = max(best, math.log2(1 + p / sigma_r2))
    return best


@pytest.fixture(scope="session")
def desk_runs():
    cache = {}

    def get(name, seed):
        if (name, seed) not in cache:
            cache[name, seed] = run_experiment(get_preset(name, episodes=DESK_EPISODES, seed=seed))
        return cache[name, seed]

    return get


@pytest.mark.criterion(1, "fixed power-control baseline total 428.55 +- 0.5")
def test_criterion_1_baseline_total():
    _, summary = run_experiment(get_preset("table2-fixed"))
    print(f"table2-fixed total {summary.total_reward:.4f} in {summary.wall_clock:.1f}s")
    assert abs(summary.total_reward - 428.55) <= 0.5
    assert abs(summary.total_reward - 428.54) <= 0.5
    assert summary.wall_clock < 60


@pytest.mark.criterion(2, "detector identities, Monte Carlo agreement, deterministic limit")
def test_criterion_2_detector():
    xs = np.linspace(0.0, 50.0, 5001)
    err = max(abs(noncentral_chi2_sf(x, 2, 0.0) - math.exp(-x / 2)) for x in xs)
    assert err <= 1e-10
    name, ok, detail = check_detection_monte_carlo(points=10, draws=1_000_000, seed=2024)
    print(f"{name}: {detail}")
    assert ok, detail
    worst = 0.0
    for tau in (0.2, 0.4):
        for received in np.linspace(0.05, 1.0, 20):
            if abs(received - tau) < 1e-2:
                continue
            det0 = detection_probability(received, 1.0, DetectorParams(1, 0.0, tau))
            noisy = detection_probability(received, 1.0, DetectorParams(1, 1e-7, tau))
            worst = max(worst, abs(noisy - det0))
    assert worst <= 1e-3


@pytest.mark.criterion(3, "q_update arithmetic, gradient vs finite differences, batched TD targets")
def test_criterion_3_learning_core():
    for check in (check_q_update, check_gradient, check_td_targets):
        name, ok, detail = check()
        print(f"{name}: {detail}")
        assert ok, f"{name}: {detail}"


@pytest.mark.criterion(4, "desk-scale power control: final reward, final jamming rate, boundary spikes")
def test_criterion_4_desk_power_control(desk_runs):
    rows, _ = desk_runs("table2-rl", 0)
    rewards = np.array([r.mean_reward for r in rows])
    jams = np.array([r.jam_rate for r in rows])
    block = DESK_EPISODES // 4
    target = 0.85 * _grid_optimum(1.0)
    assert _grid_optimum(0.5) == pytest.approx(2.2928, abs=1e-4)
    assert _grid_optimum(1.0) == pytest.approx(1.5361, abs=1e-4)

    final_reward = rewards[-100:].mean()
    final_jam = jams[-block // 20:].mean()
    spikes = {b: jams[b:b + 10].max() for b in (block, 2 * block, 3 * block)}
    print(f"final-100 reward {final_reward:.4f} (target {target:.4f}); "
          f"final-block tail jamming rate {final_jam:.4f}; whole final block {jams[-block:].mean():.4f}")
    print("max jamming rate within 10 episodes of each boundary: "
          + ", ".join(f"{b}: {v:.3f}" for b, v in spikes.items()))

    failures = []
    if final_reward < target:
        failures.append(f"final reward {final_reward:.4f} < {target:.4f}")
    if final_jam > 0.05:
        failures.append(f"final jamming rate {final_jam:.4f} > 0.05")
    for b, v in spikes.items():
        if v < 0.2:
            failures.append(f"no spike >= 0.2 after boundary {b} (max {v:.3f})")
    assert not failures, "; ".join(failures)


@pytest.mark.criterion(5, "full-scale power-control totals within 10% and decreasing in sigma_J^2")
def test_criterion_5_full_table2():
    paper = {0.0: 36552.44, 1e-4: 34849.52, 1e-3: 31264.54}
    totals = {}
    for sigma, ref in paper.items():
        _, summary = run_experiment(get_preset("table2-rl", sigma_j2=sigma))
        totals[sigma] = summary.total_reward
        print(f"sigma_j2={sigma:g}: total {summary.total_reward:.2f} vs {ref:.2f} "
              f"({100 * (summary.total_reward / ref - 1):+.1f}%)")
    for sigma, ref in paper.items():
        assert abs(totals[sigma] - ref) <= 0.10 * ref
    assert totals[0.0] > totals[1e-4] > totals[1e-3]


@pytest.mark.criterion(6, "desk-scale orderings: PCAM >= PC, multi > single, discrete >= continuous")
def test_criterion_6_orderings(desk_runs):
    names = ("table2-rl", "table3-rl", "table5-rl", "table6-cs-sc", "table6-cs-mc")
    means = {n: float(np.mean([desk_runs(n, s)[1].total_reward for s in SEEDS])) for n in names}
    print(", ".join(f"{n} {v:.1f}" for n, v in means.items()))
    failures = []
    if not means["table3-rl"] >= means["table2-rl"]:
        failures.append("PCAM < PC")
    if not means["table5-rl"] > means["table3-rl"]:
        failures.append("multi-channel <= single-channel")
    if not means["table3-rl"] >= means["table6-cs-sc"]:
        failures.append("continuous > discrete, single channel")
    if not means["table5-rl"] >= means["table6-cs-mc"]:
        failures.append("continuous > discrete, multi-channel")
    assert not failures, "; ".join(failures)


@pytest.mark.criterion(7, "multi-channel jammer stay frequencies 0.8 / 0.2")
def test_criterion_7_jammer_dynamics():
    name, ok, detail = check_jammer_stay(trials=100_000, seed=77)
    print(f"{name}: {detail}")
    assert ok, detail


@pytest.mark.criterion(8, "run is byte-reproducible and seed-sensitive")
def test_criterion_8_cli_determinism(tmp_path):
    cfg = tmp_path / "det.cfg"
    cfg.write_text("mode = pcam\nepisodes = 40\nsigma_j2 = 1e-4\n")

    def run(seed, out):
        subprocess.run(
            [sys.executable, "-m", "jamshield", "run", "--config", str(cfg), "--seed", str(seed), "--out", str(out)],
            check=True, capture_output=True,
        )
        return out.read_bytes()

    first = run(4, tmp_path / "a.csv")
    assert run(4, tmp_path / "b.csv") == first
    assert run(5, tmp_path / "c.csv") != first
