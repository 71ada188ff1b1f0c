"""Simulator tests.

Every empirical rate is checked against the closed-form renewal value,
which is the independent prediction the simulator exists to validate.
Seeds are fixed throughout; all assertions are deterministic.
"""

from __future__ import annotations

import random

import pytest

import dualdelay as dd


def growth_cfg(seed: int, horizon: float = 1e6, trials: int = 3) -> dd.SimConfig:
    return dd.SimConfig(horizon=horizon, trials=trials, base_seed=seed)


# ---------------------------------------------------------------------------
# Config validation
# ---------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(dd.DomainError):
        dd.SimConfig(horizon=0.0)
    with pytest.raises(dd.DomainError):
        dd.SimConfig(trials=0)
    with pytest.raises(dd.DomainError):
        dd.SimConfig(confirm_depth=0)
    with pytest.raises(dd.DomainError):
        dd.SimConfig(adv_sync_mode="warp")


# ---------------------------------------------------------------------------
# Growth rates vs the renewal formula
# ---------------------------------------------------------------------------


def test_honest_growth_pure_poisson():
    est = dd.simulate_honest_growth(0.5, 0.0, growth_cfg(1))
    assert est.empirical_rate == pytest.approx(0.5, abs=max(0.005, 3 * est.ci_halfwidth))


@pytest.mark.parametrize(
    "lam,delay",
    [(0.5, 0.4), (2.0, 1.0), (0.5, 1.0), (5.0, 0.1)],
)
def test_honest_growth_matches_formula(lam, delay):
    est = dd.simulate_honest_growth(lam, delay, growth_cfg(2))
    expected = dd.honest_growth_rate(lam, delay)
    tol = max(0.01 * expected, 3 * est.ci_halfwidth)
    assert abs(est.empirical_rate - expected) <= tol


@pytest.mark.parametrize("lam,delay", [(0.5, 1.0), (1.0, 0.5), (0.5, 0.0)])
def test_adversarial_serial_matches_formula(lam, delay):
    est = dd.simulate_adversarial_growth(lam, delay, growth_cfg(3))
    expected = dd.effective_adversarial_rate(lam, delay)
    tol = max(0.01 * expected, 3 * est.ci_halfwidth)
    assert abs(est.empirical_rate - expected) <= tol


def test_adversarial_pipelined_matches_arrival_rate():
    cfg = dd.SimConfig(horizon=1e6, trials=3, base_seed=4, adv_sync_mode="pipelined_queue")
    est = dd.simulate_adversarial_growth(0.5, 1.0, cfg)
    assert est.empirical_rate == pytest.approx(0.5, rel=0.01)


def test_adversarial_zero_delay_modes_agree():
    for mode in dd.ADV_SYNC_MODES:
        cfg = dd.SimConfig(horizon=2e5, trials=2, base_seed=5, adv_sync_mode=mode)
        est = dd.simulate_adversarial_growth(0.5, 0.0, cfg)
        assert est.empirical_rate == pytest.approx(0.5, rel=0.02)


def test_pipelined_unstable_rejected():
    cfg = dd.SimConfig(horizon=100.0, base_seed=1, adv_sync_mode="pipelined_queue")
    with pytest.raises(dd.UnstableQueue):
        dd.simulate_adversarial_growth(1.0, 1.0, cfg)
    # serial mode has no stability constraint
    dd.simulate_adversarial_growth(1.0, 1.0, dd.SimConfig(horizon=100.0, base_seed=1))


@pytest.mark.parametrize("lam,delay", [(0.5, 0.5), (0.9, 1.0), (0.2, 0.3)])
def test_mode_divergence(lam, delay):
    # rho in (0.05, 1): the queueing reading outpaces the serial reading
    serial = dd.simulate_adversarial_growth(lam, delay, growth_cfg(6, horizon=2e5))
    cfg = dd.SimConfig(horizon=2e5, trials=3, base_seed=6, adv_sync_mode="pipelined_queue")
    pipelined = dd.simulate_adversarial_growth(lam, delay, cfg)
    assert pipelined.empirical_rate > serial.empirical_rate


def test_growth_estimate_fields():
    est = dd.simulate_honest_growth(1.0, 0.2, growth_cfg(7, horizon=1e4, trials=4))
    assert est.block_count > 0
    assert est.ci_halfwidth >= 0.0
    assert est.empirical_rate == pytest.approx(est.block_count / (4 * 1e4), rel=1e-12)
    single = dd.simulate_honest_growth(1.0, 0.2, growth_cfg(7, horizon=1e4, trials=1))
    assert single.ci_halfwidth == 0.0


def test_growth_rejects_zero_rate():
    with pytest.raises(dd.DomainError):
        dd.simulate_honest_growth(0.0, 0.1, growth_cfg(1))
    with pytest.raises(dd.DomainError):
        dd.simulate_adversarial_growth(0.0, 0.1, growth_cfg(1))


# ---------------------------------------------------------------------------
# Determinism and stream independence
# ---------------------------------------------------------------------------


def test_growth_determinism():
    a = dd.simulate_honest_growth(0.7, 0.3, growth_cfg(11, horizon=1e4))
    b = dd.simulate_honest_growth(0.7, 0.3, growth_cfg(11, horizon=1e4))
    assert a == b


def test_growth_seed_sensitivity():
    a = dd.simulate_honest_growth(0.7, 0.3, growth_cfg(11, horizon=1e4))
    b = dd.simulate_honest_growth(0.7, 0.3, growth_cfg(12, horizon=1e4))
    assert a.block_count != b.block_count


def test_race_determinism_and_thread_insensitivity():
    params = dd.StaticParams(10.0, 0.3, 0.4, 0.4)
    cfg = dd.SimConfig(trials=400, confirm_depth=6, base_seed=13)
    a = dd.simulate_private_race(params, cfg)
    b = dd.simulate_private_race(params, cfg)
    c = dd.simulate_private_race(params, cfg, threads=4)
    assert a == b == c


def test_trial_shuffle_leaves_aggregates_unchanged():
    params = dd.StaticParams(10.0, 0.3, 0.4, 0.4)
    outcomes = [dd.race_trial_outcome(params, 6, 14, t) for t in range(200)]
    shuffled_order = list(range(200))
    random.Random(0).shuffle(shuffled_order)
    shuffled = [dd.race_trial_outcome(params, 6, 14, t) for t in shuffled_order]
    assert sum(w for _, w in outcomes) == sum(w for _, w in shuffled)
    assert sum(l for l, _ in outcomes) == sum(l for l, _ in shuffled)
    # and the public aggregate equals the kernel-level sum
    result = dd.simulate_private_race(params, dd.SimConfig(trials=200, confirm_depth=6, base_seed=14))
    assert result.success_count == sum(1 for _, w in outcomes if w)


def test_streams_differ_between_sides():
    h = dd.trial_stream(1, 0, 0).random(4).tolist()
    a = dd.trial_stream(1, 0, 1).random(4).tolist()
    other_trial = dd.trial_stream(1, 1, 0).random(4).tolist()
    assert h != a
    assert h != other_trial


# ---------------------------------------------------------------------------
# Races
# ---------------------------------------------------------------------------


def test_race_negligible_adversary():
    params = dd.StaticParams(10.0, 1e-4, 0.4, 0.4)
    result = dd.simulate_private_race(params, dd.SimConfig(trials=2000, confirm_depth=6, base_seed=15))
    assert result.success_prob == pytest.approx(0.0, abs=1e-3)
    assert result.mean_honest_len == 6.0


def test_race_success_decays_with_depth():
    params = dd.StaticParams(10.0, 0.3, 0.4, 0.4)
    probs = []
    for k in (1, 3, 6, 12):
        cfg = dd.SimConfig(trials=20_000, confirm_depth=k, base_seed=16)
        probs.append(dd.simulate_private_race(params, cfg).success_prob)
    assert all(b <= a for a, b in zip(probs, probs[1:]))
    assert probs[-1] < 0.05
    assert probs[0] > probs[-1]


def test_race_supercritical_adversary_usually_wins():
    params = dd.StaticParams(10.0, 0.6, 0.4, 0.4)
    cfg = dd.SimConfig(trials=5000, confirm_depth=6, base_seed=17)
    result = dd.simulate_private_race(params, cfg)
    assert result.success_prob > 0.5


def test_race_requires_interior_beta():
    cfg = dd.SimConfig(trials=10, confirm_depth=2, base_seed=1)
    with pytest.raises(dd.DomainError):
        dd.simulate_private_race(dd.StaticParams(1.0, 0.0, 0.1, 0.1), cfg)
    with pytest.raises(dd.DomainError):
        dd.simulate_private_race(dd.StaticParams(1.0, 1.0, 0.1, 0.1), cfg)


# ---------------------------------------------------------------------------
# Empirical threshold
# ---------------------------------------------------------------------------


def test_empirical_threshold_symmetric_case():
    cfg = dd.SimConfig(horizon=2e5, trials=1, base_seed=18)
    est = dd.estimate_empirical_threshold(10.0, 0.4, 0.4, cfg)
    assert est == pytest.approx(0.5, abs=0.02)


def test_empirical_threshold_asymmetric_cases():
    cfg = dd.SimConfig(horizon=2e5, trials=1, base_seed=19)
    est = dd.estimate_empirical_threshold(5.0, 0.4, 0.6, cfg)
    assert est == pytest.approx(0.618, abs=0.02)
    est = dd.estimate_empirical_threshold(5.0, 0.4, 2.0, cfg)
    assert est == pytest.approx(0.890, abs=0.02)


def test_empirical_threshold_determinism():
    cfg = dd.SimConfig(horizon=5e4, trials=1, base_seed=20)
    a = dd.estimate_empirical_threshold(5.0, 0.4, 0.6, cfg)
    b = dd.estimate_empirical_threshold(5.0, 0.4, 0.6, cfg)
    assert a == b
