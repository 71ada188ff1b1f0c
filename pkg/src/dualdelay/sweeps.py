"""Parameter sweeps behind the threshold and security-probability reports.

These produce plain row dictionaries; the CLI handles formatting, and the
test suite calls them directly.
"""

from __future__ import annotations

import math
from typing import Sequence

from .analytic import (
    dynamic_threshold_asymptotic,
    dynamic_threshold_exact,
    exceedance_probability,
    honest_delay,
    normal_cdf,
    static_threshold_approx,
    static_threshold_exact,
)
from .errors import NoRootInUnitInterval
from .params import DynamicParams

# Figure 1 sweep: symmetric honest delay 0.4 s, adversarial delay 0..2 s in
# 0.02 s steps, one curve per block rate.
FIG1_LAMBDAS = (5.0, 10.0, 20.0)
FIG1_DELTA_HONEST = 0.4
FIG1_DELTA_ADV_MAX = 2.0
FIG1_DELTA_ADV_STEP = 0.02

# Figure 2 sweep: validator counts 1e2 .. 1e12 by decades.
FIG2_N_GRID = tuple(10**k for k in range(2, 13))

# Grids searched by the constants-exploration mode.
EXPLORE_CORR_C = (0.5, 1.0, 2.0, 4.0)
EXPLORE_SYNC_C = (0.01, 0.1, 1.0, 10.0)
EXPLORE_DELAY_COEFF = (0.01, 0.05, 0.2)


def fig1_delta_adv_axis() -> list[float]:
    steps = round(FIG1_DELTA_ADV_MAX / FIG1_DELTA_ADV_STEP)
    return [i * FIG1_DELTA_ADV_STEP for i in range(steps + 1)]


def static_threshold_rows(
    lambdas: Sequence[float], delta_honest: float, delta_adv_axis: Sequence[float]
) -> list[dict]:
    """One row per (lambda, delta_adv): exact and linearized thresholds."""
    rows = []
    for lam in lambdas:
        for da in delta_adv_axis:
            exact = static_threshold_exact(lam, delta_honest, da)
            approx = static_threshold_approx(lam, delta_honest, da)
            rows.append(
                {
                    "lambda": lam,
                    "delta_adv": da,
                    "beta_star_exact": exact.beta_star,
                    "beta_star_approx": approx.beta_star,
                    "clamped": approx.clamped,
                }
            )
    return rows


def dynamic_threshold_rows(base: DynamicParams, n_axis: Sequence[float]) -> list[dict]:
    """Asymptotic and exact scale-dependent thresholds along a node-count axis.

    The axis value sets both the total node count and the validator count.
    The exact column is empty where the boundary has no root in (0, 1).
    """
    rows = []
    for n in n_axis:
        params = DynamicParams(
            n_total=n,
            n_val=n,
            delay_coeff=base.delay_coeff,
            topo_k=base.topo_k,
            sync_c=base.sync_c,
            corr_c=base.corr_c,
            lambda_total=base.lambda_total,
        )
        asym = dynamic_threshold_asymptotic(params)
        try:
            exact = dynamic_threshold_exact(params)
            exact_beta, residual = exact.beta_star, exact.residual
        except NoRootInUnitInterval:
            exact_beta, residual = None, None
        rows.append(
            {
                "n": n,
                "delta_n": honest_delay(n, base.delay_coeff),
                "beta_star_asymptotic": asym.beta_star,
                "beta_star_exact": exact_beta,
                "residual": residual,
            }
        )
    return rows


def security_prob_rows(base: DynamicParams, n_grid: Sequence[float]) -> list[dict]:
    """Security probability along a validator-count grid.

    Per n (used as both node and validator count): honest delay, corruption
    probability, asymptotic threshold, standardized threshold, Pr[secure]
    and the exceedance tail.
    """
    rows = []
    for n in n_grid:
        params = DynamicParams(
            n_total=n,
            n_val=n,
            delay_coeff=base.delay_coeff,
            topo_k=base.topo_k,
            sync_c=base.sync_c,
            corr_c=base.corr_c,
            lambda_total=base.lambda_total,
        )
        report = exceedance_probability(params)
        rows.append(
            {
                "n": n,
                "delta_n": honest_delay(n, base.delay_coeff),
                "p_star": report.p_star,
                "beta_star": report.beta_star,
                "z_n": report.z_n,
                "pr_secure": normal_cdf(report.z_n),
                "pr_exceed_exact": report.pr_exceed_exact,
                "exact_from_gaussian": report.exact_from_gaussian,
            }
        )
    return rows


def _z_curve(lambda_total: float, sync_c: float, corr_c: float, n_grid: Sequence[float]) -> list[float]:
    zs = []
    for n in n_grid:
        beta_star = 1.0 / (2.0 + lambda_total * sync_c * math.log(n))
        p_star = corr_c / math.sqrt(n)
        zs.append(math.sqrt(n) * (beta_star - p_star) / math.sqrt(p_star * (1.0 - p_star)))
    return zs


def dip_then_rise(zs: Sequence[float], margin: float = 0.05) -> int | None:
    """Index of an interior strict local minimum of the curve, if the curve
    falls into it and climbs back out by at least `margin`; None otherwise.

    Detection runs on the standardized threshold rather than the
    probability itself, which saturates at 0/1 and hides the shape.
    """
    j = min(range(len(zs)), key=lambda i: zs[i])
    if j == 0 or j == len(zs) - 1:
        return None
    if max(zs[:j]) - zs[j] >= margin and max(zs[j + 1 :]) - zs[j] >= margin:
        return j
    return None


def explore_fig2_constants(
    lambda_total: float,
    n_grid: Sequence[float] = FIG2_N_GRID,
    corr_c_grid: Sequence[float] = EXPLORE_CORR_C,
    sync_c_grid: Sequence[float] = EXPLORE_SYNC_C,
    delay_coeff_grid: Sequence[float] = EXPLORE_DELAY_COEFF,
) -> list[dict]:
    """Search constants for which the security probability dips then rises
    over the grid, matching the non-monotone shape the dynamic model allows.

    The underlying model gives no constants, so any hits are reported as
    found values, never asserted as canonical. The threshold rule used here
    does not involve delay_coeff; it is carried through so a hit names a
    full parameter set.
    """
    hits = []
    for corr_c in corr_c_grid:
        if not corr_c / math.sqrt(min(n_grid)) < 1.0:
            continue
        for sync_c in sync_c_grid:
            zs = _z_curve(lambda_total, sync_c, corr_c, n_grid)
            j = dip_then_rise(zs)
            if j is None:
                continue
            for delay_coeff in delay_coeff_grid:
                hits.append(
                    {
                        "corr_c": corr_c,
                        "sync_c": sync_c,
                        "delay_coeff": delay_coeff,
                        "lambda": lambda_total,
                        "dip_n": n_grid[j],
                        "z_at_dip": zs[j],
                    }
                )
    return hits
