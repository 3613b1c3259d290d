"""Seeded Monte Carlo runners behind the CLI.

Every trial draws from its own generator, derived from the master seed and
a counter key ``(stream, *indices)`` through :class:`numpy.random.SeedSequence`.
A trial's draws therefore depend only on its key, never on which worker ran
it or in what order, and results are reduced in key order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import netmodel
from .channel import ChannelScenario, received_power
from .config import ExperimentConfig, ExperimentKind
from .countermeasure import (
    expected_statistic_exact,
    expected_statistic_small_p,
    max_covert_probability,
)
from .detector import (
    ThresholdMode,
    analytic_significance,
    cox_stuart_test,
    required_locations,
)
from .netmodel import NetworkGraph, Placement, Region
from .routing import (
    Route,
    beacon_flood,
    dbr_route,
    gbr_route,
    secure_relay_ratio,
)
from .warden import WardenWalk, collect_walk, spacing_for_edge_power

__all__ = [
    "trial_rng",
    "map_trials",
    "DetectionSetup",
    "DetectionResult",
    "run_detection_trials",
    "walk_for",
    "RoutedNetwork",
    "routed_network",
    "SecureRatioRow",
    "secure_ratio_point",
    "Table",
    "run_sweep",
    "run_experiment",
]

# stream ids keep the substreams of different experiment parts apart
STREAM_DETECT = 0
STREAM_NETWORK = 1
STREAM_DBR = 2
STREAM_GBR = 3


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _chunks(n: int, parts: int) -> list[range]:
    size = max(1, math.ceil(n / parts))
    return [range(lo, min(n, lo + size)) for lo in range(0, n, size)]


def _run_chunk(fn, indices: range):
    return [fn(i) for i in indices]


def map_trials(fn, n: int, threads: int = 1) -> list:
    """``[fn(0), ..., fn(n-1)]``, optionally spread over worker processes.

    ``fn`` must be picklable when ``threads > 1``. Output order is index
    order regardless of the worker count.
    """
    if threads <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    chunks = _chunks(n, threads * 4)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(partial(_run_chunk, fn), chunks)
        return [r for part in parts for r in part]


# --- detection ---------------------------------------------------------------


@dataclass(frozen=True)
class DetectionSetup:
    scenario: ChannelScenario
    walk: WardenWalk
    transmit_prob: float
    beta: float
    mode: ThresholdMode | None = None
    per_sample_bernoulli: bool = False


@dataclass(frozen=True)
class DetectionResult:
    h1_rate: float
    stderr: float
    mean_statistic: float
    trials: int
    statistics: np.ndarray
    decisions: np.ndarray


def _detection_trial(setup: DetectionSetup, seed: int, key: tuple, i: int) -> tuple[int, bool]:
    rng = trial_rng(seed, *key, i)
    values = collect_walk(
        setup.scenario, setup.walk, setup.transmit_prob, rng,
        per_sample_bernoulli=setup.per_sample_bernoulli,
    )
    out = cox_stuart_test(values, setup.beta, setup.mode)
    return out.statistic, out.detected


def run_detection_trials(
    setup: DetectionSetup, trials: int, seed: int, threads: int = 1, key: tuple = (STREAM_DETECT,)
) -> DetectionResult:
    """Repeat walk + Cox-Stuart test ``trials`` times; summarize the H1 rate."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    results = map_trials(partial(_detection_trial, setup, seed, tuple(key)), trials, threads)
    stats = np.array([s for s, _ in results], dtype=np.int64)
    decisions = np.array([d for _, d in results], dtype=bool)
    hits = int(decisions.sum())
    rate = hits / trials
    return DetectionResult(
        h1_rate=rate,
        stderr=math.sqrt(rate * (1.0 - rate) / trials),
        mean_statistic=int(stats.sum()) / trials,
        trials=trials,
        statistics=stats,
        decisions=decisions,
    )


def walk_for(cfg: ExperimentConfig, scenario: ChannelScenario, t: int) -> WardenWalk:
    spacing = cfg.spacing
    if spacing is None:
        spacing = spacing_for_edge_power(scenario, t, cfg.edge_ratio)
    return WardenWalk(t=t, m=cfg.m, spacing=spacing)


# --- networks ----------------------------------------------------------------


@dataclass(frozen=True)
class RoutedNetwork:
    """A network with the BS at id 0 and the source at id 1."""

    graph: NetworkGraph
    attempt: int
    beacon: object

    BS = 0
    SOURCE = 1


def routed_network(
    placement: Placement,
    n: int,
    region: Region,
    detection_radius: float,
    comm_radius: float,
    bs_position,
    source_position,
    seed: int,
    key: tuple,
    *,
    density: float | None = None,
    clusters: int = 6,
    spread: float = 12.0,
    max_attempts: int = 2000,
) -> RoutedNetwork:
    """Draw networks until the source can reach the BS.

    Attempt ``a`` uses the substream ``key + (a,)``.
    """
    for attempt in range(max_attempts):
        rng = trial_rng(seed, *key, attempt)
        pts = netmodel.generate_nodes(
            placement, region, rng, n=n, density=density, clusters=clusters, spread=spread
        )
        pos = np.vstack([np.asarray([bs_position, source_position], dtype=float), pts])
        graph = netmodel.build_graph(pos, detection_radius, comm_radius)
        beacon = beacon_flood(graph, RoutedNetwork.BS)
        if beacon.reachable(RoutedNetwork.SOURCE):
            return RoutedNetwork(graph, attempt, beacon)
    raise RuntimeError(
        f"source unreachable in {max_attempts} {placement.value} networks with n={n}"
    )


def _route(net: RoutedNetwork, router: str, p_max: float, seed: int, key: tuple) -> Route:
    if router == "dbr":
        return dbr_route(net.graph, net.beacon, net.SOURCE, p_max, trial_rng(seed, STREAM_DBR, *key))
    return gbr_route(net.graph, net.beacon, net.SOURCE, trial_rng(seed, STREAM_GBR, *key), p_max)


def _network_kwargs(cfg: ExperimentConfig) -> dict:
    return dict(
        region=cfg.region,
        detection_radius=cfg.detection_radius,
        comm_radius=cfg.comm_radius,
        bs_position=cfg.bs_position,
        source_position=cfg.source_position,
        clusters=cfg.clusters,
        spread=cfg.spread,
        max_attempts=cfg.max_attempts,
    )


def _secure_trial(placement, n, routers, p_max, net_kwargs, seed, point_key, i):
    density = n / net_kwargs["region"].area if placement is Placement.PPP else None
    net = routed_network(placement, n, seed=seed, key=(STREAM_NETWORK, *point_key, i),
                         density=density, **net_kwargs)
    return tuple(secure_relay_ratio(_route(net, r, p_max, seed, (*point_key, i)), net.graph)
                 for r in routers)


@dataclass(frozen=True)
class SecureRatioRow:
    density: float
    placement: Placement
    router: str
    mean_secure_ratio: float
    stderr: float
    trials: int


def secure_ratio_point(
    cfg: ExperimentConfig, placement: Placement, n: int, threads: int = 1,
    trials: int | None = None,
) -> list[SecureRatioRow]:
    """Mean secure-relay ratio of each router over the same random networks."""
    trials = cfg.trials if trials is None else trials
    if n == 0:
        # no nodes to relay through: the zero-relay convention gives 1
        return [SecureRatioRow(0.0, placement, r, 1.0, 0.0, trials) for r in cfg.routers]
    placement_idx = list(Placement).index(placement)
    fn = partial(_secure_trial, placement, n, cfg.routers, cfg.p_max, _network_kwargs(cfg),
                 cfg.seed, (placement_idx, n))
    ratios = np.array(map_trials(fn, trials, threads), dtype=float).reshape(trials, -1)
    rows = []
    for j, router in enumerate(cfg.routers):
        col = ratios[:, j]
        sd = float(np.std(col, ddof=1)) if trials > 1 else 0.0
        rows.append(SecureRatioRow(
            density=n / cfg.region.area,
            placement=placement,
            router=router,
            mean_secure_ratio=math.fsum(col) / trials,
            stderr=sd / math.sqrt(trials),
            trials=trials,
        ))
    return rows


# --- tables ------------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[list]


def _sweep_t(cfg: ExperimentConfig, threads: int) -> Table:
    rows = []
    for a_idx, alpha in enumerate(cfg.alphas):
        scenario = cfg.scenario_for(alpha)
        ts = set(cfg.t_values)
        ts.update(required_locations(b, alpha).t for b in cfg.betas)
        for t in sorted(ts):
            beta_an = analytic_significance(t, alpha)
            setup = DetectionSetup(scenario, walk_for(cfg, scenario, t), cfg.transmit_prob,
                                   beta_an, cfg.mode, cfg.per_sample_bernoulli)
            res = run_detection_trials(setup, cfg.trials, cfg.seed, threads,
                                       key=(STREAM_DETECT, a_idx, t))
            rows.append([alpha, t, beta_an, res.h1_rate])
    return Table(["alpha", "t", "beta_analytic", "h1_rate_empirical"], rows)


def _sweep_p(cfg: ExperimentConfig, threads: int) -> Table:
    rows = []
    scenario = cfg.scenario
    for t in cfg.t_values:
        walk = walk_for(cfg, scenario, t)
        powers = received_power(walk.distances(), scenario)
        threshold = max_covert_probability(t, cfg.beta)
        for p_idx, p in enumerate(cfg.p_values):
            setup = DetectionSetup(scenario, walk, p, cfg.beta, cfg.mode, cfg.per_sample_bernoulli)
            res = run_detection_trials(setup, cfg.trials, cfg.seed, threads,
                                       key=(STREAM_DETECT, t, p_idx))
            rows.append([
                t, p, threshold,
                expected_statistic_small_p(p, t),
                expected_statistic_exact(p, walk.m, powers, scenario.noise_power),
                res.h1_rate,
            ])
    return Table(["t", "p", "p_threshold", "expected_statistic_approx",
                  "expected_statistic_exact", "h1_rate_empirical"], rows)


def _secure_sweep(cfg: ExperimentConfig, threads: int) -> Table:
    rows = []
    for placement in cfg.placements:
        for n in cfg.node_counts:
            for r in secure_ratio_point(cfg, placement, n, threads):
                rows.append([r.density, r.placement.value, r.router,
                             r.mean_secure_ratio, r.stderr, r.trials])
    return Table(["density", "placement", "router", "mean_secure_ratio", "stderr", "trials"], rows)


def _detect_once(cfg: ExperimentConfig, threads: int) -> Table:
    scenario = cfg.scenario
    walk = walk_for(cfg, scenario, cfg.t)
    setup = DetectionSetup(scenario, walk, cfg.transmit_prob, cfg.beta, cfg.mode,
                           cfg.per_sample_bernoulli)
    res = run_detection_trials(setup, cfg.trials, cfg.seed, threads)
    return Table(
        ["t", "m", "spacing", "transmit_prob", "beta", "trials", "h1_rate", "stderr",
         "mean_statistic"],
        [[walk.t, walk.m, walk.spacing, cfg.transmit_prob, cfg.beta, res.trials,
          res.h1_rate, res.stderr, res.mean_statistic]],
    )


def run_sweep(cfg: ExperimentConfig, threads: int = 1) -> Table:
    """Tabulate a sweep experiment (sweep-t, sweep-p or secure-ratio)."""
    if cfg.kind is ExperimentKind.SWEEP_T:
        return _sweep_t(cfg, threads)
    if cfg.kind is ExperimentKind.SWEEP_P:
        return _sweep_p(cfg, threads)
    if cfg.kind is ExperimentKind.SECURE_RATIO_SWEEP:
        return _secure_sweep(cfg, threads)
    raise ValueError(f"{cfg.kind.value} is not a sweep")


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> Table:
    if cfg.kind is ExperimentKind.DETECT_ONCE:
        return _detect_once(cfg, threads)
    return run_sweep(cfg, threads)


def single_network(cfg: ExperimentConfig, with_endpoints: bool) -> RoutedNetwork | NetworkGraph:
    """The one network behind ``netgen`` / ``route``."""
    if with_endpoints:
        density = cfg.density if cfg.placement is Placement.PPP else None
        return routed_network(cfg.placement, cfg.n, seed=cfg.seed, key=(STREAM_NETWORK,),
                              density=density, **_network_kwargs(cfg))
    rng = trial_rng(cfg.seed, STREAM_NETWORK)
    pts = netmodel.generate_nodes(cfg.placement, cfg.region, rng, n=cfg.n, density=cfg.density,
                                  clusters=cfg.clusters, spread=cfg.spread)
    return netmodel.build_graph(pts, cfg.detection_radius, cfg.comm_radius)


def single_route(cfg: ExperimentConfig) -> tuple[RoutedNetwork, Route]:
    net = single_network(cfg, with_endpoints=True)
    return net, _route(net, cfg.router, cfg.p_max, cfg.seed, ())
