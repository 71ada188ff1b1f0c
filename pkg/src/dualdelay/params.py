"""Domain types: model parameters and result records.

All types are plain dataclasses. Parameter classes validate their invariants
at construction time; result records are passive containers filled by the
operations that compute them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

# Labels a ThresholdResult.method may carry.
THRESHOLD_METHODS = frozenset(
    {"closed_form_quadratic", "bisection", "linear_approx", "asymptotic"}
)


@dataclass(frozen=True)
class StaticParams:
    """Fixed-delay model parameters.

    lambda_total : total block generation rate, blocks/second
    beta         : adversarial power fraction in [0, 1]
    delta_honest : propagation delay among honest nodes, seconds
    delta_adv    : synchronization delay among adversarial nodes, seconds
    """

    lambda_total: float
    beta: float
    delta_honest: float
    delta_adv: float

    def __post_init__(self) -> None:
        if not self.lambda_total > 0:
            raise DomainError(f"lambda_total must be > 0, got {self.lambda_total}")
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must be in [0, 1], got {self.beta}")
        if self.delta_honest < 0 or self.delta_adv < 0:
            raise DomainError("delays must be >= 0")

    @property
    def lambda_a(self) -> float:
        return self.beta * self.lambda_total

    @property
    def lambda_h(self) -> float:
        # Defined as the remainder so lambda_a + lambda_h == lambda_total exactly.
        return self.lambda_total - self.lambda_a


@dataclass(frozen=True)
class DynamicParams:
    """Scale-dependent model parameters.

    n_total     : total node count (validators plus zero-power nodes)
    n_val       : validator count, n_val <= n_total
    delay_coeff : honest delay coefficient a in Delta(n) = a * ln(n), seconds
    topo_k      : exponent controlling how adversarial power shortens block
                  reception delay, dimensionless > 0
    sync_c      : coefficient of the adversary's internal synchronization
                  delay c * ln(1 + beta * n), seconds
    corr_c      : coefficient of the per-validator corruption probability
                  corr_c / sqrt(n_val), dimensionless > 0
    lambda_total: total block generation rate, blocks/second

    The two coefficients named "c" in the underlying formulas are distinct
    parameters here (sync_c vs corr_c).
    """

    n_total: float
    n_val: float
    delay_coeff: float
    topo_k: float
    sync_c: float
    corr_c: float
    lambda_total: float

    def __post_init__(self) -> None:
        if not self.n_val >= 1:
            raise DomainError(f"n_val must be >= 1, got {self.n_val}")
        if not self.n_total >= self.n_val:
            raise DomainError(
                f"n_total ({self.n_total}) must be >= n_val ({self.n_val})"
            )
        for name in ("delay_coeff", "topo_k", "sync_c", "corr_c", "lambda_total"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        p = self.corr_c / math.sqrt(self.n_val)
        if not p < 1.0:
            raise DomainError(
                f"corruption probability corr_c/sqrt(n_val) = {p} must be < 1"
            )

    @property
    def n_zp(self) -> float:
        return self.n_total - self.n_val


@dataclass(frozen=True)
class QueueMetrics:
    """Steady-state M/D/1 quantities for the adversarial sync queue.

    rho       : utilization, lambda_a * delta_adv
    w_queue   : mean queueing wait before service, seconds
    w_total   : mean sojourn time (wait + service), seconds
    queue_len : mean number of blocks in the system, lambda_a * w_total
    """

    rho: float
    w_queue: float
    w_total: float
    queue_len: float


@dataclass(frozen=True)
class ThresholdResult:
    """A security threshold together with how it was obtained.

    method is one of THRESHOLD_METHODS. residual is |F(beta_star)| for
    root-found values and 0.0 for closed forms. clamped marks a
    linear-approximation value that was cut back to [0, 1].
    """

    beta_star: float
    method: str
    residual: float = 0.0
    clamped: bool = False


@dataclass(frozen=True)
class SecurityReport:
    """Scale-dependent security summary for one parameter set.

    pr_exceed_exact carries the binomial tail when n_val <= 1e6; for larger
    n_val it holds the Gaussian value and exact_from_gaussian is set.
    pr_exceed_mc stays None until filled in from a Monte Carlo run.
    """

    beta_star: float
    p_star: float
    z_n: float
    pr_exceed_gaussian: float
    pr_exceed_exact: float
    pr_exceed_mc: float | None = None
    exact_from_gaussian: bool = field(default=False)
