"""Monte Carlo simulation of honest and private chain growth and their race.

Chain growth is a renewal process: every extension is separated from the
next by a fixed propagation freeze plus an exponential generation wait, so
inter-extension gaps are i.i.d. delay + Exp(rate). The genesis block counts
as an extension event, so the first gap has the same law as the rest.

Reproducibility contract: all randomness flows through numpy Generators
seeded as

    Generator(PCG64(SeedSequence(entropy=base_seed, spawn_key=(trial, side))))

with side 0 for the honest stream and side 1 for the adversarial stream of
a trial. Identical (config, base_seed) therefore reproduce every draw, and
trials may run in any order or concurrently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, UnstableQueue
from .params import StaticParams

HONEST_STREAM = 0
ADVERSARY_STREAM = 1

ADV_SYNC_MODES = ("serial_sync", "pipelined_queue")


@dataclass(frozen=True)
class SimConfig:
    """Knobs shared by all simulation runs.

    horizon       : simulated seconds for growth-rate runs
    confirm_depth : honest chain length that settles a race
    trials        : independent repetitions
    base_seed     : root of every RNG stream (see module docstring)
    adv_sync_mode : serial_sync couples each private block to the previous
                    block's completed synchronization (gap = Exp + delay);
                    pipelined_queue is the literal M/D/1 with blocks queueing
                    for a single synchronization server
    """

    horizon: float = 1e6
    confirm_depth: int = 6
    trials: int = 1
    base_seed: int = 0
    adv_sync_mode: str = "serial_sync"

    def __post_init__(self) -> None:
        if not self.horizon > 0:
            raise DomainError("horizon must be > 0")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if self.confirm_depth < 1:
            raise DomainError("confirm_depth must be >= 1")
        if self.adv_sync_mode not in ADV_SYNC_MODES:
            raise DomainError(f"adv_sync_mode must be one of {ADV_SYNC_MODES}")


@dataclass(frozen=True)
class GrowthEstimate:
    """Empirical chain growth rate.

    empirical_rate is the per-trial blocks/horizon averaged over trials;
    block_count the total blocks over all trials; ci_halfwidth a 95%
    normal-theory halfwidth from the across-trial spread (0.0 when a single
    trial gives no spread to measure).
    """

    empirical_rate: float
    block_count: int
    ci_halfwidth: float


@dataclass(frozen=True)
class RaceResult:
    """Aggregate outcome of private-attack races."""

    success_count: int
    trials: int
    success_prob: float
    mean_honest_len: float
    mean_adv_len: float


def trial_stream(base_seed: int, trial_index: int, stream_id: int) -> np.random.Generator:
    """The documented (seed -> stream) mapping; see module docstring."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial_index, stream_id))
    return np.random.Generator(np.random.PCG64(ss))


def _count_renewals(rng: np.random.Generator, rate: float, delay: float, horizon: float) -> int:
    """Events of the renewal process with gaps delay + Exp(rate) in [0, horizon]."""
    mean_gap = delay + 1.0 / rate
    count = 0
    elapsed = 0.0
    while True:
        remaining = horizon - elapsed
        chunk = int(remaining / mean_gap * 1.05) + 64
        gaps = delay + rng.exponential(1.0 / rate, size=chunk)
        times = elapsed + np.cumsum(gaps)
        within = int(np.searchsorted(times, horizon, side="right"))
        count += within
        if within < chunk:
            return count
        elapsed = float(times[-1])


def _count_mdd1_departures(
    rng: np.random.Generator, rate: float, service: float, horizon: float
) -> int:
    """Departures by `horizon` from an M/D/1 queue started empty.

    Arrivals are Poisson(rate); departures follow the Lindley recursion
    D_i = max(A_i, D_{i-1}) + service, computed in closed form as a running
    maximum. Arrivals past the horizon cannot depart within it.
    """
    if service == 0.0:
        return _count_renewals(rng, rate, 0.0, horizon)
    count = 0
    elapsed = 0.0
    carry = -math.inf  # max over past arrivals of (A_j - (j+1) * service), shifted
    index_base = 0
    while elapsed < horizon:
        chunk = int((horizon - elapsed) * rate * 1.05) + 64
        arrivals = elapsed + np.cumsum(rng.exponential(1.0 / rate, size=chunk))
        idx = index_base + np.arange(chunk)
        shifted = np.maximum.accumulate(arrivals - service * idx)
        if carry > -math.inf:
            shifted = np.maximum(shifted, carry)
        departures = shifted + service * (idx + 1)
        count += int(np.count_nonzero((departures <= horizon) & (arrivals <= horizon)))
        if arrivals[-1] > horizon:
            return count
        elapsed = float(arrivals[-1])
        carry = float(shifted[-1])
        index_base += chunk


def _growth_estimate(counts: list[int], horizon: float) -> GrowthEstimate:
    rates = np.asarray(counts, dtype=float) / horizon
    mean = float(rates.mean())
    if len(rates) >= 2:
        ci = 1.959963984540054 * float(rates.std(ddof=1)) / math.sqrt(len(rates))
    else:
        ci = 0.0
    return GrowthEstimate(empirical_rate=mean, block_count=int(sum(counts)), ci_halfwidth=ci)


def simulate_honest_growth(lambda_h: float, delta_honest: float, config: SimConfig) -> GrowthEstimate:
    """Empirical honest-chain growth rate; expectation lambda_h / (1 + lambda_h * delta_honest)."""
    if not lambda_h > 0:
        raise DomainError("lambda_h must be > 0")
    if delta_honest < 0:
        raise DomainError("delta_honest must be >= 0")
    counts = [
        _count_renewals(
            trial_stream(config.base_seed, t, HONEST_STREAM), lambda_h, delta_honest, config.horizon
        )
        for t in range(config.trials)
    ]
    return _growth_estimate(counts, config.horizon)


def simulate_adversarial_growth(lambda_a: float, delta_adv: float, config: SimConfig) -> GrowthEstimate:
    """Empirical private-chain growth rate.

    serial_sync reproduces lambda_a / (1 + lambda_a * delta_adv); the
    pipelined_queue mode instead yields the arrival rate lambda_a whenever
    the queue is stable. The two disagree on purpose, so the gap between
    the queueing and renewal readings of private-chain growth is measurable.
    """
    if not lambda_a > 0:
        raise DomainError("lambda_a must be > 0")
    if delta_adv < 0:
        raise DomainError("delta_adv must be >= 0")
    if config.adv_sync_mode == "pipelined_queue":
        if lambda_a * delta_adv >= 1.0:
            raise UnstableQueue(
                f"rho = {lambda_a * delta_adv} >= 1: pipelined queue diverges"
            )
        counter = _count_mdd1_departures
    else:
        counter = _count_renewals
    counts = [
        counter(
            trial_stream(config.base_seed, t, ADVERSARY_STREAM), lambda_a, delta_adv, config.horizon
        )
        for t in range(config.trials)
    ]
    return _growth_estimate(counts, config.horizon)


def race_trial_outcome(
    params: StaticParams, confirm_depth: int, base_seed: int, trial_index: int
) -> tuple[int, bool]:
    """One private-attack race: (private chain length, adversary won).

    The honest side runs until its chain reaches confirm_depth; at that
    instant the private chain, grown serial-sync from the same genesis, is
    measured. The adversary wins on a tie (it controls the tie-break).
    """
    lam_h, lam_a = params.lambda_h, params.lambda_a
    h_rng = trial_stream(base_seed, trial_index, HONEST_STREAM)
    t_confirm = confirm_depth * params.delta_honest + float(
        h_rng.exponential(1.0 / lam_h, size=confirm_depth).sum()
    )
    a_rng = trial_stream(base_seed, trial_index, ADVERSARY_STREAM)
    if lam_a > 0:
        adv_len = _count_renewals(a_rng, lam_a, params.delta_adv, t_confirm)
    else:
        adv_len = 0
    return adv_len, adv_len >= confirm_depth


def simulate_private_race(
    params: StaticParams, config: SimConfig, threads: int = 1
) -> RaceResult:
    """Race the honest chain against a withheld private chain.

    Per-trial outcomes come from race_trial_outcome under the module's seed
    mapping; aggregation is a plain sum, so trial order (and any concurrent
    execution) cannot change the result.
    """
    if not 0.0 < params.beta < 1.0:
        raise DomainError("race requires 0 < beta < 1")
    trials = range(config.trials)
    run = lambda t: race_trial_outcome(params, config.confirm_depth, config.base_seed, t)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, trials, chunksize=1024))
    else:
        outcomes = [run(t) for t in trials]
    success_count = sum(1 for _, won in outcomes if won)
    total_adv = sum(length for length, _ in outcomes)
    return RaceResult(
        success_count=success_count,
        trials=config.trials,
        success_prob=success_count / config.trials,
        mean_honest_len=float(config.confirm_depth),
        mean_adv_len=total_adv / config.trials,
    )


def estimate_empirical_threshold(
    lambda_total: float,
    delta_honest: float,
    delta_adv: float,
    config: SimConfig,
    bracket_width: float = 0.01,
) -> float:
    """Locate the power fraction where simulated growth rates cross.

    Bisects beta on the sign of (adversarial rate - honest rate) from
    long-horizon growth runs, one fresh derived seed per probe, until the
    bracket is narrower than bracket_width. Returns the bracket midpoint.
    """
    if not lambda_total > 0:
        raise DomainError("lambda_total must be > 0")
    lo, hi = 0.0, 1.0
    step = 0
    while hi - lo > bracket_width:
        mid = 0.5 * (lo + hi)
        seed = int(
            np.random.SeedSequence(entropy=config.base_seed, spawn_key=(step,)).generate_state(
                1, np.uint64
            )[0]
        )
        probe = replace(config, base_seed=seed)
        adv = simulate_adversarial_growth(mid * lambda_total, delta_adv, probe)
        hon = simulate_honest_growth(lambda_total - mid * lambda_total, delta_honest, probe)
        if adv.empirical_rate - hon.empirical_rate < 0:
            lo = mid
        else:
            hi = mid
        step += 1
    return 0.5 * (lo + hi)
