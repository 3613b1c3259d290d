"""Covert (low probability of detection) communication against a mobile warden.

Submodules
----------
statmath        normal quantile, sign-test thresholds, F(m, m) CDF
channel         path loss, fading and received-sample draws
warden          multi-location radiometer walk
detector        Cox-Stuart trend test and detection bounds
countermeasure  randomized slot scheduling
netmodel        node placement, dual-radius graphs, components
routing         density-based and gradient routing, secure-relay ratio
harness         seeded Monte Carlo runners (CLI: ``lpdsim``)
"""

from .channel import ChannelScenario, Fading, PathLossLaw
from .detector import CoxStuartOutcome, Decision, ThresholdMode, cox_stuart_test
from .warden import SamplingVector, WardenWalk, collect_walk

__version__ = "0.1.0"

__all__ = [
    "ChannelScenario",
    "Fading",
    "PathLossLaw",
    "CoxStuartOutcome",
    "Decision",
    "ThresholdMode",
    "cox_stuart_test",
    "SamplingVector",
    "WardenWalk",
    "collect_walk",
]
