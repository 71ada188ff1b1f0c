"""Security analysis of longest-chain consensus under dual propagation delays.

Closed-form thresholds and security probabilities (analytic), Monte Carlo
chain-growth and race simulation (simulate), corruption-model sampling
(corruption), and sweep/report plumbing behind the dualdelay CLI.
"""

__version__ = "0.1.0"

from .analytic import (
    binomial_exceedance,
    corruption_probability,
    dynamic_threshold_asymptotic,
    dynamic_threshold_exact,
    effective_adversarial_rate,
    exceedance_probability,
    honest_delay,
    honest_growth_rate,
    mdd1_metrics,
    normal_cdf,
    normal_sf,
    security_condition_holds,
    split_strategy_rates,
    standardized_threshold,
    static_threshold_approx,
    static_threshold_exact,
    total_delay_window,
)
from .corruption import (
    CorruptionRun,
    ExceedanceEstimate,
    asymptotic_threshold_rule,
    clt_convergence_sweep,
    mc_exceedance,
    sample_corruption,
    wilson_interval,
    with_mc_estimate,
)
from .errors import (
    AllocationError,
    ConfigError,
    DomainError,
    DualDelayError,
    NoRootInUnitInterval,
    UnstableQueue,
)
from .params import (
    DynamicParams,
    QueueMetrics,
    SecurityReport,
    StaticParams,
    ThresholdResult,
)
from .simulate import (
    ADV_SYNC_MODES,
    GrowthEstimate,
    RaceResult,
    SimConfig,
    estimate_empirical_threshold,
    race_trial_outcome,
    simulate_adversarial_growth,
    simulate_honest_growth,
    simulate_private_race,
    trial_stream,
)

__all__ = [
    "__version__",
    "ADV_SYNC_MODES",
    "AllocationError",
    "ConfigError",
    "CorruptionRun",
    "DomainError",
    "DualDelayError",
    "DynamicParams",
    "ExceedanceEstimate",
    "GrowthEstimate",
    "NoRootInUnitInterval",
    "QueueMetrics",
    "RaceResult",
    "SecurityReport",
    "SimConfig",
    "StaticParams",
    "ThresholdResult",
    "UnstableQueue",
    "asymptotic_threshold_rule",
    "binomial_exceedance",
    "clt_convergence_sweep",
    "corruption_probability",
    "dynamic_threshold_asymptotic",
    "dynamic_threshold_exact",
    "effective_adversarial_rate",
    "estimate_empirical_threshold",
    "exceedance_probability",
    "honest_delay",
    "honest_growth_rate",
    "mc_exceedance",
    "mdd1_metrics",
    "normal_cdf",
    "normal_sf",
    "race_trial_outcome",
    "sample_corruption",
    "security_condition_holds",
    "simulate_adversarial_growth",
    "simulate_honest_growth",
    "simulate_private_race",
    "split_strategy_rates",
    "standardized_threshold",
    "static_threshold_approx",
    "static_threshold_exact",
    "total_delay_window",
    "trial_stream",
    "wilson_interval",
    "with_mc_estimate",
]
