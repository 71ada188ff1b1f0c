"""Closed-form security model for longest-chain consensus under dual delays.

Growth rates follow the delayed-renewal form r/(1 + r*d): a chain extending
at Poisson rate r, where every extension must wait out a propagation delay d
before the next one can build on it, grows at that throttled rate. Security
thresholds are the power fractions where the adversarial and honest throttled
rates cross. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math

from .errors import AllocationError, DomainError, NoRootInUnitInterval, UnstableQueue
from .params import DynamicParams, QueueMetrics, SecurityReport, StaticParams, ThresholdResult

_SQRT2 = math.sqrt(2.0)

# Above this validator count the exact binomial tail is replaced by the
# Gaussian value (flagged in the report) to keep the summation bounded.
EXACT_TAIL_MAX_N = 10**6


# ---------------------------------------------------------------------------
# Growth rates and the M/D/1 view of adversarial synchronization
# ---------------------------------------------------------------------------

def effective_adversarial_rate(lambda_a: float, delta_adv: float) -> float:
    """Growth rate of a private chain whose blocks each need delta_adv
    seconds of internal synchronization: lambda_a / (1 + lambda_a * delta_adv).

    Bounded above by both lambda_a and 1/delta_adv.
    """
    if lambda_a < 0 or delta_adv < 0:
        raise DomainError("lambda_a and delta_adv must be >= 0")
    return lambda_a / (1.0 + lambda_a * delta_adv)


def honest_growth_rate(lambda_h: float, delta_honest: float) -> float:
    """Growth rate of the honest longest chain under propagation delay:
    lambda_h / (1 + lambda_h * delta_honest)."""
    if lambda_h < 0 or delta_honest < 0:
        raise DomainError("lambda_h and delta_honest must be >= 0")
    return lambda_h / (1.0 + lambda_h * delta_honest)


def mdd1_metrics(lambda_a: float, delta_adv: float) -> QueueMetrics:
    """Steady-state metrics of the M/D/1 queue with Poisson(lambda_a)
    arrivals and fixed service time delta_adv.

    rho = lambda_a * delta_adv          (must be < 1 for stability)
    W_q = rho * delta_adv / (2 (1-rho)) (Pollaczek-Khinchine, deterministic service)
    W   = delta_adv + W_q
    L   = lambda_a * W                  (Little's law)
    """
    if not lambda_a > 0 or not delta_adv > 0:
        raise DomainError("mdd1_metrics requires lambda_a > 0 and delta_adv > 0")
    rho = lambda_a * delta_adv
    if rho >= 1.0:
        raise UnstableQueue(f"rho = {rho} >= 1: queue has no steady state")
    w_queue = rho * delta_adv / (2.0 * (1.0 - rho))
    w_total = delta_adv + w_queue
    return QueueMetrics(rho=rho, w_queue=w_queue, w_total=w_total, queue_len=lambda_a * w_total)


# ---------------------------------------------------------------------------
# Fixed-delay security threshold
# ---------------------------------------------------------------------------

def _static_boundary(beta: float, lambda_total: float, delta_honest: float, delta_adv: float) -> float:
    """Adversarial minus honest throttled rate at power split beta.

    Zero exactly at the security threshold; negative below it.
    """
    adv = effective_adversarial_rate(beta * lambda_total, delta_adv)
    hon = honest_growth_rate((1.0 - beta) * lambda_total, delta_honest)
    return adv - hon


def _bisect(f, lo: float, hi: float, max_iter: int = 200, width: float = 1e-15):
    """Bisection on a bracketed sign change f(lo) < 0 < f(hi) or the reverse.

    Runs until the bracket is narrower than `width` (or an exact zero is
    hit), capped at max_iter iterations. Returns (root, |f(root)|).
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo, 0.0
    if fhi == 0.0:
        return hi, 0.0
    if (flo > 0) == (fhi > 0):
        raise NoRootInUnitInterval(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid, 0.0
        if (fmid > 0) == (fhi > 0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
        if hi - lo <= width:
            break
    root = 0.5 * (lo + hi)
    return root, abs(f(root))


def static_threshold_exact(lambda_total: float, delta_honest: float, delta_adv: float) -> ThresholdResult:
    """Threshold beta* where the two throttled growth rates are equal.

    Solves the boundary equation 2b - 1 = b (1-b) lambda (delta_adv -
    delta_honest) by bisection on the rate difference over (0, 1). The
    equation has exactly one root there; the symmetric-delay case lands on
    0.5 exactly (the first bisection midpoint).
    """
    if not lambda_total > 0:
        raise DomainError("lambda_total must be > 0")
    if delta_honest < 0 or delta_adv < 0:
        raise DomainError("delays must be >= 0")
    f = lambda b: _static_boundary(b, lambda_total, delta_honest, delta_adv)
    root, residual = _bisect(f, 1e-15, 1.0 - 1e-15)
    return ThresholdResult(beta_star=root, method="bisection", residual=residual)


def static_threshold_approx(lambda_total: float, delta_honest: float, delta_adv: float) -> ThresholdResult:
    """First-order threshold 1/2 + lambda (delta_adv - delta_honest) / 4,
    clamped to [0, 1] with the clamp flagged.

    The linearization degrades as lambda |delta_adv - delta_honest| grows;
    values past the unit interval are plotted, not errors.
    """
    if not lambda_total > 0:
        raise DomainError("lambda_total must be > 0")
    if delta_honest < 0 or delta_adv < 0:
        raise DomainError("delays must be >= 0")
    raw = 0.5 + lambda_total * (delta_adv - delta_honest) / 4.0
    clamped = raw < 0.0 or raw > 1.0
    return ThresholdResult(
        beta_star=min(1.0, max(0.0, raw)),
        method="linear_approx",
        residual=0.0,
        clamped=clamped,
    )


def security_condition_holds(params: StaticParams) -> bool:
    """True iff the honest chain strictly outgrows the private chain,
    i.e. the system parameters sit strictly below the threshold."""
    adv = effective_adversarial_rate(params.lambda_a, params.delta_adv)
    hon = honest_growth_rate(params.lambda_h, params.delta_honest)
    return adv < hon


# ---------------------------------------------------------------------------
# Scale-dependent delays and thresholds
# ---------------------------------------------------------------------------

def honest_delay(n_total: float, delay_coeff: float) -> float:
    """Honest propagation delay Delta(n) = delay_coeff * ln(n_total).

    Natural log; any base change is absorbed by the coefficient. Requires
    n_total >= 2 so the delay cannot vanish.
    """
    if not n_total >= 2:
        raise DomainError(f"n_total must be >= 2, got {n_total}")
    if not delay_coeff > 0:
        raise DomainError("delay_coeff must be > 0")
    return delay_coeff * math.log(n_total)


def total_delay_window(params: DynamicParams, beta: float) -> tuple[float, float, float]:
    """Adversarial delay window at power fraction beta.

    Returns (delta_reception, delta_internal, delta_total):
      delta_reception = Delta(n) * exp(-topo_k * beta)   reception of honest blocks
      delta_internal  = sync_c * ln(1 + beta * n_total)  internal synchronization
      delta_total     = their sum
    """
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must be in [0, 1], got {beta}")
    d_n = honest_delay(params.n_total, params.delay_coeff)
    delta_reception = d_n * math.exp(-params.topo_k * beta)
    delta_internal = params.sync_c * math.log1p(beta * params.n_total)
    return delta_reception, delta_internal, delta_reception + delta_internal


def dynamic_threshold_asymptotic(params: DynamicParams) -> ThresholdResult:
    """Large-scale threshold 1 / (2 + lambda * sync_c * ln(n_total)).

    Always in (0, 0.5]; decays like 1/ln(n).
    """
    if not params.n_total >= 2:
        raise DomainError("n_total must be >= 2")
    beta = 1.0 / (2.0 + params.lambda_total * params.sync_c * math.log(params.n_total))
    return ThresholdResult(beta_star=beta, method="asymptotic", residual=0.0)


def dynamic_threshold_exact(params: DynamicParams) -> ThresholdResult:
    """Root of the scale-dependent boundary 1 - 2b = b * lambda *
    (Delta_total(b) - Delta(n)), with the delay window evaluated at b.

    Keeps the orientation of the asymptotic derivation (a wider adversarial
    window lowers the threshold), so a valid root sits below 0.5 whenever
    Delta_total > Delta(n). Deliberately opposite to the fixed-delay model;
    the two are not reconciled. Raises NoRootInUnitInterval when the
    boundary has no sign change on (0, 1), which happens outside the
    small-beta regime the derivation assumes.
    """
    if not params.n_total >= 2:
        raise DomainError("n_total must be >= 2")
    d_n = honest_delay(params.n_total, params.delay_coeff)

    def g(beta: float) -> float:
        _, _, d_total = total_delay_window(params, beta)
        return (1.0 - 2.0 * beta) - beta * params.lambda_total * (d_total - d_n)

    root, residual = _bisect(g, 1e-12, 1.0 - 1e-12)
    return ThresholdResult(beta_star=root, method="bisection", residual=residual)


def corruption_probability(params: DynamicParams) -> float:
    """Per-validator corruption probability corr_c / sqrt(n_val)."""
    p = params.corr_c / math.sqrt(params.n_val)
    if not p < 1.0:
        raise DomainError(f"corruption probability {p} must be < 1")
    return p


def standardized_threshold(n_val: float, beta_star: float, p_star: float) -> float:
    """Z-score of the threshold against the corruption distribution:
    sqrt(n_val) * (beta_star - p_star) / sqrt(p_star (1 - p_star))."""
    if not 0.0 < p_star < 1.0:
        raise DomainError(f"p_star must be in (0, 1), got {p_star}")
    if not n_val >= 1:
        raise DomainError("n_val must be >= 1")
    return math.sqrt(n_val) * (beta_star - p_star) / math.sqrt(p_star * (1.0 - p_star))


# ---------------------------------------------------------------------------
# Normal CDF and binomial tails
# ---------------------------------------------------------------------------

def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function.

    Accurate to well under 1e-12 absolute on |z| <= 8. For deep upper-tail
    work use normal_sf, which keeps relative accuracy where the CDF itself
    rounds to 1.
    """
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_sf(z: float) -> float:
    """Upper tail 1 - Phi(z), computed directly as erfc(z / sqrt 2) / 2 so
    it stays positive (no underflow to 0) until z is around 37-38."""
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    return 0.5 * math.erfc(z / _SQRT2)


def binomial_exceedance(n_val: int, p: float, beta_star: float) -> float:
    """Pr[X > beta_star * n_val] for X ~ Binomial(n_val, p).

    Strict inequality; a count exactly at the threshold does not exceed it.
    Terms are accumulated in log space starting from the end of the summed
    range nearest the distribution mode, where the probability mass peaks,
    and extended outward; when the tail contains the mode the complement
    (the small side) is summed instead.
    """
    if not (isinstance(n_val, int) or float(n_val).is_integer()):
        raise DomainError(f"n_val must be an integer, got {n_val}")
    n = int(n_val)
    if n < 1:
        raise DomainError("n_val must be >= 1")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must be in (0, 1), got {p}")
    if n > EXACT_TAIL_MAX_N:
        raise DomainError(
            f"exact tail limited to n_val <= {EXACT_TAIL_MAX_N}; use the Gaussian value"
        )
    k_min = math.floor(beta_star * n) + 1
    if k_min > n:
        return 0.0
    if k_min <= 0:
        return 1.0
    if n <= 50:
        # Binomial coefficients up to comb(50, 25) are exact doubles, so the
        # straight sum is exact for dyadic p (no log-space rounding).
        return math.fsum(
            math.comb(n, k) * p**k * (1.0 - p) ** (n - k) for k in range(k_min, n + 1)
        )
    mode = math.floor((n + 1) * p)
    if k_min > mode:
        return _pmf_block_sum(n, p, k_min, n)
    return 1.0 - _pmf_block_sum(n, p, 0, k_min - 1)


def _pmf_block_sum(n: int, p: float, k_lo: int, k_hi: int) -> float:
    """Sum of Binomial(n, p) pmf over k_lo..k_hi inclusive.

    Anchors the log-pmf at the end of the block nearest the mode with
    lgamma, then walks outward with the pmf ratio recurrence, so every
    term is scaled against the block's largest one.
    """
    log_p, log_q = math.log(p), math.log1p(-p)
    mode = math.floor((n + 1) * p)

    def log_pmf(k: int) -> float:
        return (
            math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
            + k * log_p + (n - k) * log_q
        )

    if k_lo > mode:
        anchor, step = k_lo, 1         # terms decay as k grows
    else:
        anchor, step = k_hi, -1        # terms decay as k shrinks
    log_anchor = log_pmf(anchor)
    total = 1.0
    log_term = 0.0                     # log(pmf(k) / pmf(anchor))
    k = anchor
    while True:
        nxt = k + step
        if nxt < k_lo or nxt > k_hi:
            break
        if step == 1:
            log_term += math.log((n - k) / (nxt)) + log_p - log_q
        else:
            log_term += math.log(k / (n - nxt)) + log_q - log_p
        term = math.exp(log_term)
        total += term
        k = nxt
        if term < 1e-20 * total:       # remaining mass below double rounding
            break
    return math.exp(log_anchor) * total


def exceedance_probability(
    params: DynamicParams,
    beta_star: float | None = None,
    p_star: float | None = None,
) -> SecurityReport:
    """Assemble the scale-dependent security report for one parameter set.

    beta_star defaults to the asymptotic threshold and p_star to the
    corruption probability; either can be forced. The exact column is the
    binomial tail Pr[X > beta_star * n_val] over n_val validators, replaced
    by the Gaussian value (and flagged) when n_val exceeds 1e6.
    """
    if beta_star is None:
        beta_star = dynamic_threshold_asymptotic(params).beta_star
    if p_star is None:
        p_star = corruption_probability(params)
    z_n = standardized_threshold(params.n_val, beta_star, p_star)
    gaussian = normal_sf(z_n)
    if params.n_val <= EXACT_TAIL_MAX_N:
        exact = binomial_exceedance(int(params.n_val), p_star, beta_star)
        from_gaussian = False
    else:
        exact = gaussian
        from_gaussian = True
    return SecurityReport(
        beta_star=beta_star,
        p_star=p_star,
        z_n=z_n,
        pr_exceed_gaussian=gaussian,
        pr_exceed_exact=exact,
        exact_from_gaussian=from_gaussian,
    )


# ---------------------------------------------------------------------------
# Split-allocation rates
# ---------------------------------------------------------------------------

def split_strategy_rates(
    beta_allocations: list[float],
    delta_total: float,
    lambda_total: float,
) -> tuple[list[float], float, float, float]:
    """Throttled growth rates when adversarial power is split across subtrees.

    With f(x) = x / (1 + x * delta_total), returns
      (per-subtree rates f(b_i * lambda),
       max of those rates,
       their sum,
       f(sum(b_i) * lambda) for the same power concentrated on one chain).

    f is increasing, so no single subtree can outgrow the concentrated
    chain. The sum of subtree rates carries no such guarantee (f is
    superadditive at 0) and is reported without an asserted ordering.
    """
    if delta_total < 0 or lambda_total < 0:
        raise DomainError("delta_total and lambda_total must be >= 0")
    if any(b < 0 for b in beta_allocations):
        raise AllocationError("allocations must be >= 0")
    total_beta = math.fsum(beta_allocations)
    if total_beta > 1.0:
        raise AllocationError(f"allocations sum to {total_beta} > 1")

    def f(x: float) -> float:
        return x / (1.0 + x * delta_total)

    per_subtree = [f(b * lambda_total) for b in beta_allocations]
    concentrated = f(total_beta * lambda_total)
    return per_subtree, max(per_subtree, default=0.0), math.fsum(per_subtree), concentrated
