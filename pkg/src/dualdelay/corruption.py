"""Monte Carlo validation of the probabilistic corruption model.

Validator corruption is X ~ Binomial(n_val, p) per trial, mapped to a power
fraction beta = X / n_val. Sampling uses numpy's binomial generator, which
switches between inversion (small n*p) and a rejection sampler (large n*p)
and is deterministic under the seed contract below.

Trials are drawn in fixed chunks of 65536, one derived stream per chunk:

    Generator(PCG64(SeedSequence(entropy=base_seed, spawn_key=(chunk_index,))))

Aggregation is order-insensitive, so chunks may be evaluated concurrently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .analytic import (
    EXACT_TAIL_MAX_N,
    binomial_exceedance,
    normal_sf,
    standardized_threshold,
)
from .errors import DomainError
from .params import SecurityReport

CHUNK = 1 << 16
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class CorruptionRun:
    """One Monte Carlo corruption experiment."""

    n_val: int
    p: float
    trials: int
    base_seed: int
    beta_star: float

    def __post_init__(self) -> None:
        if self.n_val < 1:
            raise DomainError("n_val must be >= 1")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must be in (0, 1), got {self.p}")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")


@dataclass(frozen=True)
class ExceedanceEstimate:
    """Monte Carlo exceedance probability with its analytic companions.

    exact is None when n_val is too large for the binomial summation.
    """

    mc_estimate: float
    ci_low: float
    ci_high: float
    exact: float | None
    gaussian: float


def _chunk_stream(base_seed: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.PCG64(ss))


def sample_corruption(run: CorruptionRun, threads: int = 1) -> np.ndarray:
    """Draw `trials` corruption fractions beta = X / n_val.

    Sample mean converges to p and sample variance to p(1-p)/n_val.
    """
    bounds = [(i, min(CHUNK, run.trials - i * CHUNK)) for i in range((run.trials + CHUNK - 1) // CHUNK)]

    def draw(args: tuple[int, int]) -> np.ndarray:
        index, size = args
        rng = _chunk_stream(run.base_seed, index)
        return rng.binomial(run.n_val, run.p, size=size) / run.n_val

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(draw, bounds))
    else:
        parts = [draw(b) for b in bounds]
    return np.concatenate(parts)


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Chosen over the Wald interval because it stays honest near 0 and 1,
    which is where exceedance probabilities live.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    # the interval contains phat exactly; keep that true under rounding
    lo = min(max(0.0, center - half), phat)
    hi = max(min(1.0, center + half), phat)
    return lo, hi


def mc_exceedance(run: CorruptionRun, threads: int = 1) -> ExceedanceEstimate:
    """Estimate Pr[beta > beta_star] (strict; ties count as secure).

    Returns the Monte Carlo fraction with a 95% Wilson interval, the exact
    binomial tail where computable, and the Gaussian approximation.
    """
    samples = sample_corruption(run, threads=threads)
    hits = int(np.count_nonzero(samples > run.beta_star))
    ci_low, ci_high = wilson_interval(hits, run.trials)
    if run.n_val <= EXACT_TAIL_MAX_N:
        exact = binomial_exceedance(run.n_val, run.p, run.beta_star)
    else:
        exact = None
    z = standardized_threshold(run.n_val, run.beta_star, run.p)
    return ExceedanceEstimate(
        mc_estimate=hits / run.trials,
        ci_low=ci_low,
        ci_high=ci_high,
        exact=exact,
        gaussian=normal_sf(z),
    )


def asymptotic_threshold_rule(lambda_total: float, sync_c: float) -> Callable[[float], float]:
    """Threshold rule n -> 1 / (2 + lambda * sync_c * ln n), the default
    pairing for the exceedance sweep."""
    if not lambda_total > 0 or not sync_c > 0:
        raise DomainError("lambda_total and sync_c must be > 0")

    def rule(n: float) -> float:
        return 1.0 / (2.0 + lambda_total * sync_c * math.log(n))

    return rule


def clt_convergence_sweep(
    corr_c: float,
    n_grid: Sequence[int],
    beta_star_rule: Callable[[float], float],
    trials: int,
    base_seed: int,
    threads: int = 1,
) -> list[dict]:
    """Exceedance probabilities along an ascending validator-count grid.

    Per n: p = corr_c / sqrt(n), beta_star from the supplied rule, then the
    Monte Carlo / exact / Gaussian triple. Each grid row gets its own
    derived seed so rows are independent.
    """
    if list(n_grid) != sorted(set(n_grid)):
        raise DomainError("n_grid must be strictly ascending")
    if not corr_c > 0:
        raise DomainError("corr_c must be > 0")
    for n in n_grid:
        if not corr_c / math.sqrt(n) < 1.0:
            raise DomainError(f"corr_c/sqrt({n}) must be < 1")
    rows = []
    for i, n in enumerate(n_grid):
        seed = int(
            np.random.SeedSequence(entropy=base_seed, spawn_key=(i,)).generate_state(1, np.uint64)[0]
        )
        p = corr_c / math.sqrt(n)
        run = CorruptionRun(
            n_val=int(n), p=p, trials=trials, base_seed=seed, beta_star=beta_star_rule(n)
        )
        est = mc_exceedance(run, threads=threads)
        rows.append(
            {
                "n": int(n),
                "p_star": p,
                "beta_star": run.beta_star,
                "mc": est.mc_estimate,
                "exact": est.exact,
                "gaussian": est.gaussian,
            }
        )
    return rows


def with_mc_estimate(report: SecurityReport, run: CorruptionRun, threads: int = 1) -> SecurityReport:
    """Fill a security report's Monte Carlo column from a corruption run."""
    est = mc_exceedance(run, threads=threads)
    return replace(report, pr_exceed_mc=est.mc_estimate)
