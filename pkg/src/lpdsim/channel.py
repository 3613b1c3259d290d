"""Large-scale-fading AWGN channel seen by Bob and by the warden."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PathLossLaw",
    "Fading",
    "ChannelScenario",
    "db_to_linear",
    "path_gain",
    "received_power",
    "willie_sample",
    "willie_samples",
    "bob_samples",
]


class PathLossLaw(enum.Enum):
    UNBOUNDED = "unbounded"  # d^-alpha
    BOUNDED = "bounded"  # 1 / (1 + d^alpha)


class Fading(enum.Enum):
    NONE = "none"
    RAYLEIGH = "rayleigh"  # unit-mean exponential power gain


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChannelScenario:
    """Everything needed to draw one received sample.

    Powers are linear (use :meth:`from_db` for dB inputs). ``block_fading``
    holds one fading gain for a whole batch of samples (one location)
    instead of redrawing it per sample.
    """

    alice_power: float
    noise_power: float = 1.0
    path_loss_exponent: float = 3.0
    path_loss_law: PathLossLaw = PathLossLaw.UNBOUNDED
    fading: Fading = Fading.NONE
    block_fading: bool = False

    def __post_init__(self):
        if not self.alice_power > 0:
            raise ValueError(f"alice_power must be > 0, got {self.alice_power}")
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if not self.path_loss_exponent > 2:
            raise ValueError(
                f"path_loss_exponent must be > 2, got {self.path_loss_exponent}"
            )
        object.__setattr__(self, "path_loss_law", PathLossLaw(self.path_loss_law))
        object.__setattr__(self, "fading", Fading(self.fading))

    @classmethod
    def from_db(cls, alice_power_db: float, noise_power_db: float = 0.0, **kwargs):
        return cls(
            alice_power=db_to_linear(alice_power_db),
            noise_power=db_to_linear(noise_power_db),
            **kwargs,
        )


def path_gain(distance, scenario: ChannelScenario):
    """Large-scale gain at ``distance`` meters (scalar or array)."""
    d = np.asarray(distance, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be non-negative")
    alpha = scenario.path_loss_exponent
    if scenario.path_loss_law is PathLossLaw.UNBOUNDED:
        if np.any(d == 0):
            raise ValueError("unbounded path loss is singular at distance 0")
        gain = d ** -alpha
    else:
        gain = 1.0 / (1.0 + d ** alpha)
    return float(gain) if gain.ndim == 0 else gain


def received_power(distance, scenario: ChannelScenario):
    """Mean power of Alice's signal at ``distance``: P0 * gain."""
    return scenario.alice_power * path_gain(distance, scenario)


def willie_samples(
    scenario: ChannelScenario,
    distance,
    alice_on,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    """Draw ``size`` received samples per entry of ``distance``.

    ``distance`` and ``alice_on`` broadcast together; the result has shape
    ``broadcast_shape + (size,)``. Each sample is N(0, h * P0 * g(d) * on + noise),
    with h = 1 or h ~ Exp(1) for Rayleigh fading.
    """
    signal = np.asarray(received_power(distance, scenario), dtype=float)
    on = np.asarray(alice_on, dtype=bool)
    signal, on = np.broadcast_arrays(signal, on)
    signal = np.where(on, signal, 0.0)[..., np.newaxis]
    shape = signal.shape[:-1] + (size,)
    if scenario.fading is Fading.RAYLEIGH:
        h_shape = signal.shape if scenario.block_fading else shape
        signal = signal * rng.exponential(1.0, h_shape)
    std = np.sqrt(signal + scenario.noise_power)
    return rng.standard_normal(shape) * std


def willie_sample(
    scenario: ChannelScenario, distance: float, alice_on: bool, rng: np.random.Generator
) -> float:
    """One draw of the warden's received sample at ``distance``."""
    return float(willie_samples(scenario, distance, alice_on, rng, 1)[0])


def bob_samples(
    scenario: ChannelScenario, distance: float, rng: np.random.Generator, size: int
) -> np.ndarray:
    # Bob sees the same channel law; he just sits at his own distance.
    return willie_samples(scenario, distance, True, rng, size)
