"""Randomized slot scheduling for Alice and its effect on the trend test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statmath import check_probability, f_cdf, normal_quantile

__all__ = [
    "TransmitSchedule",
    "max_covert_probability",
    "expected_statistic_small_p",
    "delta_negative_prob_exact",
    "expected_statistic_exact",
    "simulate_delta_negative",
]


@dataclass(frozen=True)
class TransmitSchedule:
    """i.i.d. Bernoulli slot schedule: transmit with ``transmit_prob`` per slot."""

    transmit_prob: float
    slots: int

    def __post_init__(self):
        check_probability("transmit_prob", self.transmit_prob)
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots}")

    def realize(self, rng: np.random.Generator) -> np.ndarray:
        return rng.random(self.slots) < self.transmit_prob


def max_covert_probability(t: int, beta: float) -> float:
    """Largest slot probability keeping the expected statistic above the threshold.

    Returns 1 - sqrt(1 + z_beta / sqrt(t)); requires t > z_beta^2.
    """
    beta = check_probability("beta", beta, open_interval=True)
    if beta >= 0.5:
        raise ValueError(f"beta must be < 0.5, got {beta}")
    z = normal_quantile(beta)
    if not t > z * z:
        raise ValueError(
            f"t={t} too small for beta={beta}: need t > {z * z:.4f}, "
            f"i.e. t >= {math.floor(z * z) + 1}"
        )
    return 1.0 - math.sqrt(1.0 + z / math.sqrt(t))


def expected_statistic_small_p(p: float, t: int) -> float:
    """Small-p approximation 0.5 * (1 - p)^2 * t of the expected statistic."""
    p = check_probability("p", p)
    return 0.5 * (1.0 - p) ** 2 * t


def delta_negative_prob_exact(
    p: float, m: int, p_near: float, p_far: float, noise: float
) -> float:
    """P{T(y_i) < T(y_{t+i})} under independent per-location Bernoulli(p) slots.

    Mixes the four on/off combinations of the two locations; each term is an
    F(m, m) CDF evaluated at the ratio of the far to the near variance.
    """
    p = check_probability("p", p)
    if not noise > 0:
        raise ValueError(f"noise must be > 0, got {noise}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    near_on = p_near + noise
    far_on = p_far + noise
    q = 1.0 - p
    return (
        q * q * f_cdf(m, 1.0)
        + p * q * f_cdf(m, far_on / noise)
        + p * q * f_cdf(m, noise / near_on)
        + p * p * f_cdf(m, far_on / near_on)
    )


def expected_statistic_exact(p: float, m: int, powers, noise: float) -> float:
    """Exact expected number of negative differences for a power profile P_1..P_2t."""
    pw = np.asarray(powers, dtype=float)
    t = pw.size // 2
    return sum(delta_negative_prob_exact(p, m, pw[i], pw[t + i], noise) for i in range(t))


def simulate_delta_negative(
    p: float,
    m: int,
    p_near: float,
    p_far: float,
    noise: float,
    n_pairs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Simulate ``n_pairs`` location pairs by sampling Gaussians; return Delta < 0 flags."""
    p = check_probability("p", p)
    on = rng.random((2, n_pairs)) < p
    var = np.where(on, np.array([[p_near], [p_far]]), 0.0) + noise
    y = rng.standard_normal((2, n_pairs, m)) * np.sqrt(var)[..., None]
    energy = np.mean(y * y, axis=2)
    return energy[0] - energy[1] < 0
