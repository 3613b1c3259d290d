"""Cox-Stuart downward-trend test and closed-form detection bounds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .statmath import (
    CLT_MIN_T,
    binomial_reject_threshold,
    check_probability,
    clt_reject_threshold,
    normal_cdf,
    normal_quantile,
)

__all__ = [
    "Decision",
    "ThresholdMode",
    "CoxStuartOutcome",
    "reject_threshold",
    "cox_stuart_statistic",
    "cox_stuart_test",
    "delta_negative_bound",
    "statistic_bound",
    "expected_statistic_bound",
    "LocationRequirement",
    "required_locations",
    "detection_margin",
    "analytic_significance",
]


class Decision(enum.Enum):
    H0_NO_TREND = "H0"
    H1_DOWNWARD_TREND = "H1"


class ThresholdMode(enum.Enum):
    EXACT_BINOMIAL = "exact"
    CLT_APPROX = "clt"

    @classmethod
    def auto(cls, t: int) -> "ThresholdMode":
        """Exact binomial quantile for t <= 20, normal approximation above."""
        return cls.CLT_APPROX if t >= CLT_MIN_T else cls.EXACT_BINOMIAL


@dataclass(frozen=True)
class CoxStuartOutcome:
    statistic: int
    threshold: float
    significance: float
    decision: Decision
    threshold_mode: ThresholdMode
    t: int

    @property
    def detected(self) -> bool:
        return self.decision is Decision.H1_DOWNWARD_TREND


def reject_threshold(t: int, beta: float, mode: ThresholdMode | None = None) -> float:
    mode = ThresholdMode.auto(t) if mode is None else ThresholdMode(mode)
    if mode is ThresholdMode.EXACT_BINOMIAL:
        return float(binomial_reject_threshold(t, beta))
    return clt_reject_threshold(t, beta)


def cox_stuart_statistic(values) -> int:
    """Number of negative first-half minus second-half differences.

    Ties count as non-negative.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 2 or v.size % 2:
        raise ValueError("Cox-Stuart test needs an even-length vector of at least 2 values")
    t = v.size // 2
    return int(np.count_nonzero(v[:t] - v[t:] < 0))


def cox_stuart_test(
    values, beta: float, mode: ThresholdMode | None = None
) -> CoxStuartOutcome:
    """Test a sampling vector for a downward trend.

    Parameters
    ----------
    values : SamplingVector or array_like
        ``2t`` sampling values, nearest location first.
    beta : float
        Significance level in (0, 1).
    mode : ThresholdMode, optional
        How the rejection threshold is computed. ``None`` picks the exact
        binomial quantile for t <= 20 and the normal approximation above.

    Returns
    -------
    CoxStuartOutcome
        H1 (downward trend) iff the statistic is strictly below the threshold.
    """
    beta = check_probability("beta", beta, open_interval=True)
    statistic = cox_stuart_statistic(values)
    t = np.asarray(values).size // 2
    mode = ThresholdMode.auto(t) if mode is None else ThresholdMode(mode)
    threshold = reject_threshold(t, beta, mode)
    decision = Decision.H1_DOWNWARD_TREND if statistic < threshold else Decision.H0_NO_TREND
    return CoxStuartOutcome(statistic, threshold, beta, decision, mode, t)


def delta_negative_bound(p_near: float, p_far: float, noise: float) -> float:
    """Second-moment bound on P{T(y_i) < T(y_{t+i})}, clamped to 1.

    ``p_near`` and ``p_far`` are Alice's received powers at locations i and
    t + i.
    """
    if not noise > 0:
        raise ValueError(f"noise must be > 0, got {noise}")
    if p_near < 0 or p_far < 0:
        raise ValueError("received powers must be non-negative")
    return min(1.0, ((p_far + noise) / (p_near + noise)) ** 2)


def statistic_bound(powers, noise: float) -> float:
    """Sum of per-difference bounds for a power profile P_1..P_2t."""
    p = np.asarray(powers, dtype=float)
    t = p.size // 2
    return float(sum(delta_negative_bound(p[i], p[t + i], noise) for i in range(t)))


def expected_statistic_bound(t: int, alpha: float) -> float:
    """t * (2 / (2^alpha + 1))^2: bound on the statistic when P_2t >= noise."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if not alpha > 2:
        raise ValueError(f"alpha must be > 2, got {alpha}")
    return t * (2.0 / (2.0 ** alpha + 1.0)) ** 2


def detection_margin(alpha: float) -> float:
    """1 - 8 / (2^alpha + 1)^2."""
    return 1.0 - 8.0 / (2.0 ** alpha + 1.0) ** 2


class LocationRequirement(NamedTuple):
    t: int  # smallest integer strictly above raw_bound
    raw_bound: float
    clt_floor: int  # t at which the normal-approximated threshold becomes valid


def required_locations(beta: float, alpha: float) -> LocationRequirement:
    """Smallest t for which the mean-statistic bound clears the CLT threshold.

    The returned ``t`` is the raw analytic requirement; ``clt_floor`` is
    reported next to it and is not applied.
    """
    beta = check_probability("beta", beta, open_interval=True)
    if beta >= 0.5:
        raise ValueError(f"one-sided test needs beta < 0.5, got {beta}")
    if not alpha > 2:
        raise ValueError(f"alpha must be > 2, got {alpha}")
    raw = (normal_quantile(beta) / detection_margin(alpha)) ** 2
    t = math.floor(raw) + 1
    return LocationRequirement(t, raw, CLT_MIN_T)


def analytic_significance(t: int, alpha: float) -> float:
    """Smallest beta the warden can certify with t differences: Phi(-c sqrt(t))."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not alpha > 2:
        raise ValueError(f"alpha must be > 2, got {alpha}")
    return normal_cdf(-detection_margin(alpha) * math.sqrt(t))
