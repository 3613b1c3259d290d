"""The mobile warden's measurement walk.

The warden visits ``2t`` locations spaced ``spacing`` meters apart on a ray
towards Alice, takes ``m`` samples at each and reduces them with a
radiometer. Location ``i`` (1-based) sits at distance ``i * spacing``, so
index 1 is the one nearest Alice; the trend test does not care about the
order in which the locations were physically visited.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelScenario, PathLossLaw, received_power, willie_samples
from .statmath import check_probability

__all__ = [
    "WardenWalk",
    "SamplingVector",
    "sampling_value",
    "collect_walk",
    "spacing_for_edge_power",
]


@dataclass(frozen=True)
class WardenWalk:
    t: int
    m: int
    spacing: float

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")

    @property
    def n_locations(self) -> int:
        return 2 * self.t

    def distances(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.n_locations + 1, dtype=float)

    def powers(self, scenario: ChannelScenario) -> np.ndarray:
        """Alice's received power P_i at each location."""
        return received_power(self.distances(), scenario)


@dataclass(frozen=True)
class SamplingVector:
    """Radiometer outputs T(y_1), ..., T(y_2t), nearest location first."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2 or values.size % 2:
            raise ValueError("a sampling vector needs an even number (>= 2) of values")
        if np.any(values < 0):
            raise ValueError("sampling values are energies and cannot be negative")
        object.__setattr__(self, "values", values)

    @property
    def t(self) -> int:
        return self.values.size // 2

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def sampling_value(samples) -> float:
    """Radiometer statistic (1/m) * sum(y_k^2)."""
    y = np.asarray(samples, dtype=float)
    if y.size == 0:
        raise ValueError("sampling_value needs at least one sample")
    return float(np.mean(y * y))


def spacing_for_edge_power(scenario: ChannelScenario, t: int, edge_ratio: float = 1.0) -> float:
    """Spacing that puts the farthest location at P_2t = edge_ratio * noise.

    ``edge_ratio = 1`` is the boundary of the regime in which the detection
    bounds hold (P_2t >= noise power).
    """
    target = edge_ratio * scenario.noise_power / scenario.alice_power
    alpha = scenario.path_loss_exponent
    if scenario.path_loss_law is PathLossLaw.UNBOUNDED:
        far = target ** (-1.0 / alpha)
    else:
        if target >= 1.0:
            raise ValueError("bounded law cannot reach that edge power at positive distance")
        far = (1.0 / target - 1.0) ** (1.0 / alpha)
    return far / (2 * t)


def collect_walk(
    scenario: ChannelScenario,
    walk: WardenWalk,
    transmit_prob: float,
    rng: np.random.Generator,
    *,
    per_sample_bernoulli: bool = False,
    warn_weak_edge: bool = False,
) -> SamplingVector:
    """Simulate one walk and return its sampling vector.

    Alice's on/off state is drawn once per location (one slot per location).
    With ``per_sample_bernoulli`` each of the ``m`` samples gets its own
    state instead.
    """
    p = check_probability("transmit_prob", transmit_prob)
    distances = walk.distances()
    if warn_weak_edge:
        edge = received_power(distances[-1], scenario)
        if edge < scenario.noise_power and not math.isclose(edge, scenario.noise_power):
            warnings.warn(
                f"farthest location receives P_2t={edge:.4g} below the noise floor "
                f"{scenario.noise_power:.4g}; detection bounds do not apply",
                RuntimeWarning,
                stacklevel=2,
            )
    if per_sample_bernoulli:
        on = rng.random((walk.n_locations, walk.m)) < p
        y = willie_samples(scenario, distances[:, None], on, rng, 1)[..., 0]
    else:
        on = rng.random(walk.n_locations) < p
        y = willie_samples(scenario, distances, on, rng, walk.m)
    return SamplingVector(np.mean(y * y, axis=1))
