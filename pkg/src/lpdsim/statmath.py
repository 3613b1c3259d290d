"""Numeric kernels: normal quantile, binomial/CLT rejection thresholds, F(m, m) CDF."""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np
from scipy import special

__all__ = [
    "check_probability",
    "normal_cdf",
    "normal_quantile",
    "binomial_cdf",
    "binomial_reject_threshold",
    "clt_reject_threshold",
    "f_cdf",
    "chi2_ratio_samples",
    "CLT_MIN_T",
]

#: smallest number of differences for which the normal approximation of the
#: sign-test quantile is considered valid (t > 20)
CLT_MIN_T = 21

# Acklam's rational approximation coefficients
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def check_probability(name: str, value: float, *, open_interval: bool = False) -> float:
    """Validate that ``value`` is a probability; return it as float."""
    value = float(value)
    if open_interval:
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie strictly in (0, 1), got {value}")
    elif not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _acklam(q: float) -> float:
    if q < _P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        return ((((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5])
                / ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0))
    if q > 1.0 - _P_LOW:
        return -_acklam(1.0 - q)
    r = q - 0.5
    s = r * r
    return ((((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * r
            / (((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0))


def normal_quantile(q: float) -> float:
    """Inverse of the standard normal CDF.

    Rational initial guess refined by one Halley step on the erfc-based CDF.
    Computed on the lower half and reflected, so ``normal_quantile(q) ==
    -normal_quantile(1 - q)`` up to the rounding of ``1 - q``.
    """
    q = check_probability("q", q, open_interval=True)
    if q == 0.5:
        return 0.0
    if q > 0.5:
        return -normal_quantile(1.0 - q)
    x = _acklam(q)
    err = normal_cdf(x) - q
    u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def binomial_cdf(k: int, t: int) -> Fraction:
    """Exact P{B <= k} for B ~ Bin(t, 1/2)."""
    if k < 0:
        return Fraction(0)
    if k >= t:
        return Fraction(1)
    return Fraction(sum(math.comb(t, j) for j in range(k + 1)), 2 ** t)


def binomial_reject_threshold(t: int, beta: float) -> int:
    """Largest integer b with P{B <= b - 1} <= beta, B ~ Bin(t, 1/2).

    Rejecting H0 when the sign statistic is strictly below ``b`` has type-I
    error at most ``beta``. Returns 0 (never reject) when P{B = 0} > beta.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    beta = check_probability("beta", beta, open_interval=True)
    # integer arithmetic: compare running counts against beta * 2**t exactly
    limit = Fraction(beta) * 2 ** t
    running = 0
    b = 0
    for k in range(t + 1):
        running += math.comb(t, k)
        if running > limit:
            break
        b = k + 1
    return b


def clt_reject_threshold(t: int, beta: float) -> float:
    """Normal approximation 0.5 * (t + sqrt(t) * z_beta) of the sign-test quantile."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if t < CLT_MIN_T:
        warnings.warn(
            f"normal approximation of the binomial quantile is unreliable for t={t} <= 20",
            RuntimeWarning,
            stacklevel=2,
        )
    return 0.5 * (t + math.sqrt(t) * normal_quantile(beta))


def f_cdf(m: int, x: float) -> float:
    """CDF of the F(m, m) distribution at ``x`` (regularized incomplete beta)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    half = 0.5 * m
    # I_{x/(1+x)}(m/2, m/2); use the complement above 1 to keep tail accuracy
    if x <= 1.0:
        return float(special.betainc(half, half, x / (1.0 + x)))
    return float(1.0 - special.betainc(half, half, 1.0 / (1.0 + x)))


def chi2_ratio_samples(m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draws of chi2(m) / chi2(m) from independent numerator and denominator."""
    return rng.chisquare(m, size) / rng.chisquare(m, size)
