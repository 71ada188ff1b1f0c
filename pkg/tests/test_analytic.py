"""Closed-form model tests.

The bisection threshold solver is checked against an independently coded
closed form: substituting the two throttled rates into the boundary
equality and clearing denominators gives D b^2 + (2 - D) b - 1 = 0 with
D = lambda (delta_adv - delta_honest), whose root in (0, 1) is
((D - 2) + sqrt(D^2 + 4)) / (2 D). That oracle lives here, not in the
package, so the two routes stay independent.
"""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dualdelay as dd

# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def quadratic_threshold(lambda_total: float, delta_honest: float, delta_adv: float) -> float:
    d = lambda_total * (delta_adv - delta_honest)
    if d == 0.0:
        return 0.5
    return ((d - 2.0) + math.sqrt(d * d + 4.0)) / (2.0 * d)


rates = st.floats(min_value=0.05, max_value=50.0, allow_nan=False)
delays = st.floats(min_value=0.0, max_value=5.0, allow_nan=False)
fractions = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


# ---------------------------------------------------------------------------
# Growth rates
# ---------------------------------------------------------------------------


def test_effective_adversarial_rate_values():
    assert dd.effective_adversarial_rate(0.5, 0.0) == 0.5
    assert dd.effective_adversarial_rate(0.5, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert dd.effective_adversarial_rate(1.0, 0.5) == pytest.approx(2.0 / 3.0, abs=1e-15)


def test_honest_growth_rate_values():
    assert dd.honest_growth_rate(0.5, 0.0) == 0.5
    assert dd.honest_growth_rate(0.5, 0.4) == pytest.approx(0.5 / 1.2, abs=1e-15)
    assert dd.honest_growth_rate(0.0, 0.4) == 0.0


def test_growth_rate_rejects_negative():
    with pytest.raises(dd.DomainError):
        dd.effective_adversarial_rate(-0.1, 1.0)
    with pytest.raises(dd.DomainError):
        dd.honest_growth_rate(0.5, -1.0)


@given(lam=rates, d1=delays, d2=delays)
def test_effective_rate_decreasing_in_delay_and_bounded(lam, d1, d2):
    lo, hi = sorted((d1, d2))
    r_lo = dd.effective_adversarial_rate(lam, lo)
    r_hi = dd.effective_adversarial_rate(lam, hi)
    assert r_hi <= r_lo
    # strictness only where the difference is resolvable in doubles
    if lam * lam * (hi - lo) > 1e-9:
        assert r_hi < r_lo
    assert r_hi <= lam
    if hi > 0:
        assert r_hi <= 1.0 / hi


# ---------------------------------------------------------------------------
# M/D/1 metrics
# ---------------------------------------------------------------------------


def test_mdd1_reference_point():
    m = dd.mdd1_metrics(0.5, 1.0)
    assert m.rho == 0.5
    assert m.w_queue == 0.5
    assert m.w_total == 1.5
    assert m.queue_len == 0.75


def test_mdd1_light_load():
    m = dd.mdd1_metrics(0.1, 0.1)
    assert m.rho == pytest.approx(0.01, rel=1e-15)
    assert m.w_total == pytest.approx(0.1 + 0.001 / 1.98, rel=1e-12)
    assert m.queue_len == pytest.approx(0.1 * m.w_total, rel=1e-15)


def test_mdd1_unstable():
    with pytest.raises(dd.UnstableQueue):
        dd.mdd1_metrics(1.0, 1.0)
    with pytest.raises(dd.UnstableQueue):
        dd.mdd1_metrics(2.0, 0.6)


@given(lam=rates, rho=st.floats(min_value=0.01, max_value=0.99))
def test_littles_law_within_4_ulps(lam, rho):
    delta = rho / lam
    m = dd.mdd1_metrics(lam, delta)
    expected = lam * m.w_total
    assert abs(m.queue_len - expected) <= 4 * math.ulp(expected)
    assert m.w_total == m.w_queue + delta


# ---------------------------------------------------------------------------
# Static threshold
# ---------------------------------------------------------------------------


def test_static_threshold_symmetric_point():
    for lam in (5.0, 10.0, 20.0):
        r = dd.static_threshold_exact(lam, 0.4, 0.4)
        assert r.beta_star == pytest.approx(0.5, abs=1e-12)
        assert r.method == "bisection"


def test_static_threshold_known_roots():
    r = dd.static_threshold_exact(5.0, 0.4, 0.6)
    assert r.beta_star == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0, abs=1e-11)
    r = dd.static_threshold_exact(5.0, 0.4, 2.0)
    assert r.beta_star == pytest.approx(quadratic_threshold(5.0, 0.4, 2.0), abs=1e-11)
    assert r.beta_star == pytest.approx(0.89039, abs=5e-6)


def test_static_threshold_matches_quadratic_oracle_200_triples():
    import random

    rng = random.Random(20240817)
    for _ in range(200):
        lam = rng.uniform(0.5, 20.0)
        dh = rng.uniform(0.0, 2.0)
        da = rng.uniform(0.0, 2.0)
        got = dd.static_threshold_exact(lam, dh, da)
        assert abs(got.beta_star - quadratic_threshold(lam, dh, da)) <= 1e-9
        assert got.residual <= 1e-12


def test_static_threshold_trichotomy():
    below = dd.static_threshold_exact(8.0, 0.5, 0.2).beta_star
    at = dd.static_threshold_exact(8.0, 0.5, 0.5).beta_star
    above = dd.static_threshold_exact(8.0, 0.5, 0.9).beta_star
    assert below < 0.5
    assert at == 0.5
    assert above > 0.5


def test_static_threshold_monotone_in_delta_adv():
    lam, dh = 10.0, 0.4
    grid = [i * 0.04 for i in range(51)]
    values = [dd.static_threshold_exact(lam, dh, da).beta_star for da in grid]
    diffs = [b - a for a, b in zip(values, values[1:])]
    assert all(d > 0 for d in diffs)


def test_static_threshold_approx_values():
    assert dd.static_threshold_approx(10.0, 0.4, 0.4).beta_star == 0.5
    r = dd.static_threshold_approx(5.0, 0.4, 0.6)
    assert r.beta_star == pytest.approx(0.75, abs=1e-15)
    assert not r.clamped
    assert r.method == "linear_approx"


def test_static_threshold_approx_clamps_with_flag():
    r = dd.static_threshold_approx(20.0, 0.4, 2.0)  # raw value 8.5
    assert r.beta_star == 1.0
    assert r.clamped
    r = dd.static_threshold_approx(20.0, 2.0, 0.4)
    assert r.beta_star == 0.0
    assert r.clamped


def test_security_condition_matches_threshold():
    cases = [(10.0, 0.4, 0.4), (5.0, 0.4, 2.0), (7.0, 1.0, 0.3)]
    for lam, dh, da in cases:
        beta_star = dd.static_threshold_exact(lam, dh, da).beta_star
        assert dd.security_condition_holds(dd.StaticParams(lam, beta_star - 1e-6, dh, da))
        assert not dd.security_condition_holds(dd.StaticParams(lam, beta_star + 1e-6, dh, da))


def test_security_condition_examples():
    assert dd.security_condition_holds(dd.StaticParams(10.0, 0.4, 0.4, 0.4))
    assert not dd.security_condition_holds(dd.StaticParams(10.0, 0.6, 0.4, 0.4))
    assert dd.security_condition_holds(dd.StaticParams(5.0, 0.7, 0.4, 2.0))


# ---------------------------------------------------------------------------
# Parameter types
# ---------------------------------------------------------------------------


def test_static_params_rate_split_is_exact():
    for lam in (0.1, 1.0, 5.0, 1 / 600):
        for beta in (0.0, 0.3, 0.5, 0.7, 1.0):
            p = dd.StaticParams(lam, beta, 0.4, 0.4)
            assert p.lambda_a + p.lambda_h == lam


def test_static_params_validation():
    with pytest.raises(dd.DomainError):
        dd.StaticParams(0.0, 0.5, 0.1, 0.1)
    with pytest.raises(dd.DomainError):
        dd.StaticParams(1.0, 1.2, 0.1, 0.1)
    with pytest.raises(dd.DomainError):
        dd.StaticParams(1.0, 0.5, -0.1, 0.1)


def test_dynamic_params_validation():
    make = lambda **kw: dd.DynamicParams(
        **{
            "n_total": 100,
            "n_val": 100,
            "delay_coeff": 0.05,
            "topo_k": 1.0,
            "sync_c": 1.0,
            "corr_c": 1.0,
            "lambda_total": 1.0,
            **kw,
        }
    )
    make()  # valid
    with pytest.raises(dd.DomainError):
        make(delay_coeff=0.0)
    with pytest.raises(dd.DomainError):
        make(n_val=200)  # n_val > n_total
    with pytest.raises(dd.DomainError):
        make(corr_c=10.0)  # corruption probability would reach 1
    p = make(n_total=150)
    assert p.n_zp == 50


# ---------------------------------------------------------------------------
# Scale-dependent delays
# ---------------------------------------------------------------------------


def test_honest_delay_values():
    assert dd.honest_delay(math.e**2, 1.0) == pytest.approx(2.0, abs=1e-14)
    assert dd.honest_delay(1e6, 0.05) == pytest.approx(0.6907755, abs=1e-6)
    with pytest.raises(dd.DomainError):
        dd.honest_delay(1, 0.05)


def _params_e2() -> dd.DynamicParams:
    return dd.DynamicParams(
        n_total=math.e**2, n_val=7, delay_coeff=1.0, topo_k=1.0,
        sync_c=1.0, corr_c=1.0, lambda_total=1.0,
    )


def test_delay_window_no_adversary():
    params = _params_e2()
    recv, internal, total = dd.total_delay_window(params, 0.0)
    assert recv == dd.honest_delay(params.n_total, params.delay_coeff)
    assert internal == 0.0
    assert total == recv


def test_delay_window_full_adversary():
    recv, internal, total = dd.total_delay_window(_params_e2(), 1.0)
    assert recv == pytest.approx(2.0 * math.exp(-1.0), abs=1e-12)
    assert internal == pytest.approx(math.log(1.0 + math.e**2), abs=1e-12)
    assert total == pytest.approx(recv + internal, abs=1e-15)


def test_delay_window_monotone_internal():
    params = _params_e2()
    v25 = dd.total_delay_window(params, 0.25)[1]
    v50 = dd.total_delay_window(params, 0.50)[1]
    v75 = dd.total_delay_window(params, 0.75)[1]
    assert v25 < v50 < v75
    recv = [dd.total_delay_window(params, b)[0] for b in (0.0, 0.5, 1.0)]
    assert all(r <= recv[0] for r in recv)


# ---------------------------------------------------------------------------
# Dynamic thresholds
# ---------------------------------------------------------------------------


def _dyn(n: float, lam: float = 1.0, sync_c: float = 1.0, **kw) -> dd.DynamicParams:
    base = {
        "n_total": n, "n_val": n, "delay_coeff": 0.05, "topo_k": 1.0,
        "sync_c": sync_c, "corr_c": 1.0, "lambda_total": lam,
    }
    base.update(kw)
    return dd.DynamicParams(**base)


def test_dynamic_asymptotic_values():
    assert dd.dynamic_threshold_asymptotic(_dyn(math.e**2, corr_c=0.5)).beta_star == pytest.approx(0.25, abs=1e-14)
    r = dd.dynamic_threshold_asymptotic(_dyn(math.e**20, corr_c=0.5))
    assert r.beta_star == pytest.approx(1.0 / 22.0, abs=1e-12)
    assert r.method == "asymptotic"
    tiny = dd.dynamic_threshold_asymptotic(_dyn(math.e**2, lam=1e-9, corr_c=0.5))
    assert tiny.beta_star == pytest.approx(0.5, abs=1e-8)


def test_dynamic_asymptotic_self_check_and_decay():
    previous = None
    for exp in range(2, 13):
        params = _dyn(10.0**exp)
        r = dd.dynamic_threshold_asymptotic(params)
        product = r.beta_star * (2.0 + params.lambda_total * params.sync_c * math.log(params.n_total))
        assert abs(product - 1.0) <= 4e-16
        if previous is not None:
            assert r.beta_star < previous
        previous = r.beta_star
    assert previous < 0.04


def test_dynamic_exact_near_asymptotic():
    params = _dyn(1e6)
    exact = dd.dynamic_threshold_exact(params)
    asym = dd.dynamic_threshold_asymptotic(params)
    assert 0.5 <= exact.beta_star / asym.beta_star <= 2.0
    assert exact.beta_star < 0.5


def test_dynamic_exact_symmetric_reduction():
    params = _dyn(1e4, lam=5.0, sync_c=1e-15, topo_k=1e-12)
    assert dd.dynamic_threshold_exact(params).beta_star == pytest.approx(0.5, abs=1e-9)


def test_dynamic_exact_residual_on_random_grid():
    import random

    rng = random.Random(7)
    for _ in range(50):
        # sync_c >= delay_coeff keeps the window above the honest delay at
        # beta = 1, which guarantees the boundary a sign change
        delay_coeff = rng.uniform(0.01, 0.5)
        params = _dyn(
            n=rng.uniform(10, 1e8),
            lam=rng.uniform(0.1, 20.0),
            sync_c=rng.uniform(delay_coeff, 2.0),
            delay_coeff=delay_coeff,
            topo_k=rng.uniform(0.1, 5.0),
        )
        r = dd.dynamic_threshold_exact(params)
        assert r.residual <= 1e-10
        assert 0.0 < r.beta_star < 1.0


def test_dynamic_exact_no_root_regime():
    params = _dyn(1e6, lam=50.0, sync_c=1e-9, delay_coeff=2.0, topo_k=50.0)
    with pytest.raises(dd.NoRootInUnitInterval):
        dd.dynamic_threshold_exact(params)


# ---------------------------------------------------------------------------
# Corruption probability and standardized threshold
# ---------------------------------------------------------------------------


def test_corruption_probability_values():
    assert dd.corruption_probability(_dyn(100)) == pytest.approx(0.1, abs=1e-15)
    assert dd.corruption_probability(_dyn(10**4)) == pytest.approx(0.01, abs=1e-15)
    with pytest.raises(dd.DomainError):
        dd.DynamicParams(
            n_total=4, n_val=4, delay_coeff=0.05, topo_k=1.0,
            sync_c=1.0, corr_c=2.0, lambda_total=1.0,
        )


def test_standardized_threshold_values():
    assert dd.standardized_threshold(100, 0.4, 0.1) == pytest.approx(10.0, abs=1e-12)
    assert dd.standardized_threshold(12345, 0.25, 0.25) == 0.0
    params = _dyn(10**4)
    beta_star = dd.dynamic_threshold_asymptotic(params).beta_star
    z = dd.standardized_threshold(10**4, beta_star, 0.01)
    assert z == pytest.approx(79.6, abs=0.05)
    with pytest.raises(dd.DomainError):
        dd.standardized_threshold(100, 0.4, 0.0)
    with pytest.raises(dd.DomainError):
        dd.standardized_threshold(100, 0.4, 1.0)


# ---------------------------------------------------------------------------
# Exceedance report
# ---------------------------------------------------------------------------


def test_exceedance_forced_small_case():
    report = dd.exceedance_probability(_dyn(4, corr_c=0.9), beta_star=0.5, p_star=0.5)
    assert report.pr_exceed_exact == 5.0 / 16.0
    assert not report.exact_from_gaussian
    assert report.pr_exceed_mc is None


def test_exceedance_forced_beta_star():
    report = dd.exceedance_probability(_dyn(100), beta_star=0.4)
    assert report.p_star == pytest.approx(0.1, abs=1e-15)
    assert report.z_n == pytest.approx(10.0, abs=1e-12)
    assert report.pr_exceed_gaussian < 1e-20


def test_exceedance_z_grows_with_scale():
    zs = [dd.exceedance_probability(_dyn(10.0**e)).z_n for e in (2, 4, 6, 8)]
    assert all(b > a for a, b in zip(zs, zs[1:]))


def test_exceedance_gaussian_fallback_above_limit():
    report = dd.exceedance_probability(_dyn(10.0**8))
    assert report.exact_from_gaussian
    assert report.pr_exceed_exact == report.pr_exceed_gaussian


def test_exceedance_gaussian_consistent_with_cdf():
    report = dd.exceedance_probability(_dyn(100))
    assert report.pr_exceed_gaussian == pytest.approx(1.0 - dd.normal_cdf(report.z_n), abs=1e-15)


# ---------------------------------------------------------------------------
# Split-allocation rates
# ---------------------------------------------------------------------------


def test_split_single_allocation_is_identity():
    per, mx, total, conc = dd.split_strategy_rates([0.4], 1.0, 1.0)
    assert per == [pytest.approx(0.4 / 1.4, abs=1e-15)]
    assert mx == total == conc


def test_split_two_way_reference_values():
    per, mx, total, conc = dd.split_strategy_rates([0.2, 0.2], 1.0, 1.0)
    assert per[0] == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert mx == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert conc == pytest.approx(0.4 / 1.4, abs=1e-15)
    assert mx < conc
    # the sum of split rates exceeds the concentrated rate here; reported,
    # not ordered
    assert total == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert total > conc


def test_split_four_way():
    per, mx, total, conc = dd.split_strategy_rates([0.1] * 4, 1.0, 1.0)
    assert mx == pytest.approx(0.1 / 1.1, abs=1e-15)
    assert mx < conc


def test_split_rejects_bad_allocations():
    with pytest.raises(dd.AllocationError):
        dd.split_strategy_rates([0.6, 0.6], 1.0, 1.0)
    with pytest.raises(dd.AllocationError):
        dd.split_strategy_rates([-0.1, 0.2], 1.0, 1.0)


def test_split_empty_allocation():
    per, mx, total, conc = dd.split_strategy_rates([], 1.0, 1.0)
    assert per == [] and mx == 0.0 and total == 0.0 and conc == 0.0


@settings(max_examples=200)
@given(
    allocations=st.lists(st.floats(min_value=0.0, max_value=0.2), min_size=1, max_size=5),
    delta=st.floats(min_value=0.0, max_value=10.0),
    lam=rates,
)
def test_split_max_never_beats_concentration(allocations, delta, lam):
    per, mx, _, conc = dd.split_strategy_rates(allocations, delta, lam)
    assert mx <= conc
    assert all(r >= 0 for r in per)
