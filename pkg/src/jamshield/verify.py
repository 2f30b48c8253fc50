"""Self-checks of the numerical core against independent oracles.

Each check returns ``(name, ok, detail)``.  The oracles here never call the
code path they check: quadrature for the Gaussian tail, direct sampling of the
detector statistic, scalar loops for batched targets, and central finite
differences for backpropagation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from jamshield.agents import (
    Transitions,
    bellman_loss,
    bellman_loss_and_grad,
    init_mlp,
    mlp_forward,
    new_qtable,
    q_update,
    td_targets,
)
from jamshield.config import get_preset
from jamshield.detector import DetectorParams, detection_probability, gaussian_q, noncentral_chi2_sf
from jamshield.experiment import run_experiment
from jamshield.jammer import JammerConfig, JammerState, multichannel_transition


def _normal_tail_quad(x: float) -> float:
    val, _ = integrate.quad(lambda u: math.exp(-0.5 * u * u) / math.sqrt(2 * math.pi), x, math.inf, epsabs=1e-14)
    return val


def check_gaussian_q():
    cases = [(x, _normal_tail_quad(x)) for x in (-2.0, 0.0, 1.0, 3.0, 5.0)]
    err = max(abs(gaussian_q(x) - ref) for x, ref in cases)
    sym = max(abs(gaussian_q(x) + gaussian_q(-x) - 1) for x in np.linspace(-8, 8, 161))
    return "gaussian_q vs quadrature", err <= 1e-12 and sym <= 1e-12, f"max err {err:.1e}, symmetry {sym:.1e}"


def check_central_chi2_identity():
    xs = np.linspace(0.0, 50.0, 501)
    err = max(abs(noncentral_chi2_sf(x, 2, 0.0) - math.exp(-x / 2)) for x in xs)
    return "chi2_2 survival = exp(-x/2) on [0, 50]", err <= 1e-10, f"max err {err:.1e}"


def check_detection_monte_carlo(points: int = 10, draws: int = 1_000_000, seed: int = 1234):
    """Detection probability vs a sampled chi-square statistic at random operating points."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        sigma = float(10 ** rng.uniform(-4, -2))
        tau = float(rng.choice([0.2, 0.4]))
        lam = float(rng.uniform(0.0, 3.0) * tau / sigma)
        p_t, h_tj = lam * sigma, 1.0  # N = 1
        pd = detection_probability(p_t, h_tj, DetectorParams(1, sigma, tau))
        # chi2_2(lam) drawn as N(sqrt(lam), 1)^2 + N(0, 1)^2
        re = rng.normal(math.sqrt(lam), 1.0, size=draws)
        im = rng.normal(0.0, 1.0, size=draws)
        mc = float(np.mean(re * re + im * im > tau / sigma))
        worst = max(worst, abs(pd - mc))
    return "detection probability vs 1e6-draw Monte Carlo", worst <= 0.005, f"max |diff| {worst:.4f}"


def check_deterministic_limit():
    worst = 0.0
    for tau in (0.2, 0.4):
        for received in (0.5 * tau, 0.9 * tau, 1.1 * tau, 2.0 * tau):
            det0 = detection_probability(received, 1.0, DetectorParams(1, 0.0, tau))
            for sigma in (1e-6, 1e-9):
                worst = max(worst, abs(detection_probability(received, 1.0, DetectorParams(1, sigma, tau)) - det0))
    ok = worst <= 1e-3 and detection_probability(0.4, 0.5, DetectorParams(1, 0.0, 0.2)) == 0.5
    return "noise -> 0 matches deterministic detector", ok, f"max |diff| {worst:.1e}"


def check_q_update():
    q = new_qtable(3)
    q_update(q, 0, 1, 2.0, 1, 0.1, 0.95)
    a = q[0, 1] == 0.1 * 2.0
    q = new_qtable(3)
    q[0, 1], q[1, 2] = 1.0, 2.0
    q_update(q, 0, 1, 0.0, 1, 0.1, 0.95)
    b = q[0, 1] == 1.0 + 0.1 * (0.95 * 2.0 - 1.0)
    q = new_qtable(3)
    q[1] = [5.0, 7.0, 9.0]
    q_update(q, 1, 0, 1.25, 1, 1.0, 0.0)
    c = q[1, 0] == 1.25
    return "q_update hand arithmetic", a and b and c, f"cases {a}, {b}, {c}"


def check_td_targets(seed: int = 7):
    rng = np.random.default_rng(seed)
    target = init_mlp([1, 8, 8, 5], rng)
    n = 64
    batch = Transitions(
        rng.random(n), rng.integers(5, size=n), rng.random(n) * 6, rng.random(n), (rng.random(n) < 0.2).astype(float)
    )
    y = td_targets(batch, target, 0.95)
    loop = []
    for i in range(n):
        best = max(mlp_forward(target, batch.next_states[i]))
        loop.append(batch.rewards[i] + (0.0 if batch.dones[i] else 0.95 * best))
    err = float(np.max(np.abs(y - np.array(loop))))
    return "td_targets batch vs scalar loop", err <= 1e-12, f"max err {err:.1e}"


def check_gradient(seed: int = 11, n_params: int = 20, h: float = 1e-5):
    rng = np.random.default_rng(seed)
    params = init_mlp([1, 16, 16, 7], rng)
    for b in params.biases:
        b[:] = rng.uniform(-0.3, 0.3, size=b.shape)
    s = rng.random(32)
    a = rng.integers(7, size=32)
    y = rng.random(32) * 5
    _, grad = bellman_loss_and_grad(params, s, a, y)
    dense = grad.dense(params).arrays()
    arrays = params.arrays()
    worst = 0.0
    for _ in range(n_params):
        k = int(rng.integers(len(arrays)))
        idx = tuple(int(rng.integers(d)) for d in arrays[k].shape)
        saved = arrays[k][idx]
        arrays[k][idx] = saved + h
        up = bellman_loss(params, s, a, y)
        arrays[k][idx] = saved - h
        down = bellman_loss(params, s, a, y)
        arrays[k][idx] = saved
        fd = (up - down) / (2 * h)
        an = dense[k][idx]
        worst = max(worst, abs(fd - an) / max(abs(fd), abs(an), 1e-6))
    return "Bellman gradient vs central differences", worst <= 1e-4, f"max rel err {worst:.1e}"


def check_jammer_stay(trials: int = 100_000, seed: int = 5):
    cfg = JammerConfig(num_channels=2)
    rng = np.random.default_rng(seed)
    out = {}
    for d in (1, 0):
        stays = 0
        for _ in range(trials):
            s = JammerState(prev_outcome=0, tau=cfg.tau_low, channel=0)
            stays += multichannel_transition(rng, s, d, cfg).channel == 0
        out[d] = stays / trials
    ok = abs(out[1] - 0.8) <= 0.004 and abs(out[0] - 0.2) <= 0.004
    return "jammer stay frequencies 0.8 / 0.2", ok, f"after d=1 {out[1]:.4f}, after d=0 {out[0]:.4f}"


def check_baseline_total():
    _, summary = run_experiment(get_preset("table2-fixed"))
    ok = abs(summary.total_reward - 428.55) <= 0.5
    return "fixed power-control baseline total 428.55 +- 0.5", ok, f"total {summary.total_reward:.3f}"


CHECKS = (
    check_gaussian_q,
    check_central_chi2_identity,
    check_detection_monte_carlo,
    check_deterministic_limit,
    check_q_update,
    check_td_targets,
    check_gradient,
    check_jammer_stay,
    check_baseline_total,
)


def run_all(log=print) -> bool:
    ok_all = True
    for check in CHECKS:
        name, ok, detail = check()
        ok_all &= bool(ok)
        log(f"[{'pass' if ok else 'FAIL'}] {name}: {detail}")
    return ok_all


__all__ = ["CHECKS", "run_all"]
