"""Density-based routing (beacon flooding + degree-weighted relay choice).

Also carries a minimal-hop gradient baseline (uniform choice among the
lower-hop neighbours, constant transmission probability) and the
secure-relay ratio used to compare the two.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .netmodel import NetworkGraph
from .statmath import check_probability, normal_cdf

__all__ = [
    "UNREACHED",
    "RoutingError",
    "BeaconState",
    "Route",
    "beacon_flood",
    "selection_bounds",
    "selection_probabilities",
    "dbr_select_relay",
    "dbr_transmit_prob",
    "dbr_route",
    "gbr_route",
    "secure_flags",
    "secure_relay_ratio",
]

log = logging.getLogger(__name__)

UNREACHED = -1
_SPAN = 3.0  # |r0| scale of the selection intervals


class RoutingError(RuntimeError):
    pass


@dataclass(frozen=True)
class BeaconState:
    bs: int
    hop_count: np.ndarray  # UNREACHED for nodes the beacon never reached
    candidates: list[list[tuple[int, int]]]  # (neighbour id, degree), lower hop only

    def reachable(self, node: int) -> bool:
        return self.hop_count[node] != UNREACHED


@dataclass(frozen=True)
class Route:
    hops: tuple[int, ...]
    transmit_prob: tuple[float, ...]  # one per transmitting hop (all but the BS)
    secure: tuple[bool, ...]

    @property
    def relays(self) -> tuple[int, ...]:
        return self.hops[:-1]


def beacon_flood(graph: NetworkGraph, bs: int) -> BeaconState:
    """Breadth-first beacon from ``bs`` over the communication layer.

    Every node keeps as relay candidates the neighbours it could have heard
    the beacon from first, i.e. those strictly one hop closer to the BS.
    """
    if not 0 <= bs < graph.n:
        raise ValueError(f"unknown base station id {bs}")
    hops = np.full(graph.n, UNREACHED, dtype=np.int64)
    hops[bs] = 0
    queue = deque([bs])
    adj = graph.comm_adjacency
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if hops[v] == UNREACHED:
                hops[v] = hops[u] + 1
                queue.append(v)
    deg = graph.degree
    candidates = [
        sorted((v, int(deg[v])) for v in adj[i] if hops[i] != UNREACHED and hops[v] < hops[i])
        if i != bs else []
        for i in range(graph.n)
    ]
    return BeaconState(bs, hops, candidates)


def _sorted_candidates(candidates) -> list[tuple[int, int]]:
    cands = sorted(((int(c), int(d)) for c, d in candidates), key=lambda cd: (cd[1], cd[0]))
    if not cands:
        raise RoutingError("no relay candidate to choose from")
    if any(d < 0 for _, d in cands):
        raise ValueError("degrees must be non-negative")
    return cands


def selection_bounds(degrees) -> np.ndarray:
    """Interval edges b_0 = 3 > ... > b_m = 0 for degrees sorted ascending.

    Candidate k (1-based) owns |r0| in (b_k, b_{k-1}], except the first,
    which owns everything above b_1.
    """
    deg = np.asarray(degrees, dtype=np.int64)
    total = int(deg.sum())
    cum = np.concatenate([[0], np.cumsum(deg)])
    return np.array([_SPAN * (1.0 - c / total) for c in cum])


def selection_probabilities(candidates) -> dict[int, float]:
    """Analytic selection probability per candidate id under a folded normal |r0|."""
    cands = _sorted_candidates(candidates)
    if sum(d for _, d in cands) == 0:
        return {c: 1.0 / len(cands) for c, _ in cands}
    b = selection_bounds([d for _, d in cands])
    probs = {cands[0][0]: 2.0 * (1.0 - normal_cdf(b[1]))}
    for k in range(1, len(cands)):
        probs[cands[k][0]] = 2.0 * (normal_cdf(b[k]) - normal_cdf(b[k + 1]))
    return probs


def dbr_select_relay(candidates, rng: np.random.Generator, size: int | None = None):
    """Pick a relay among ``(id, degree)`` candidates; higher degree is favoured.

    Draws r0 ~ N(0, 1) and maps |r0| onto the degree-proportional intervals
    of :func:`selection_bounds`. Equal degrees are ordered by id. Returns one
    id, or an array of ``size`` ids.
    """
    cands = _sorted_candidates(candidates)
    ids = np.array([c for c, _ in cands])
    n = 1 if size is None else size
    if sum(d for _, d in cands) == 0:
        log.warning("all relay candidates have degree 0; choosing uniformly")
        picks = ids[rng.integers(len(ids), size=n)]
    else:
        inner = selection_bounds([d for _, d in cands])[1:-1]  # b_1 .. b_{m-1}
        a = np.abs(rng.standard_normal(n))
        # candidate index = number of inner edges at or above |r0|
        idx = len(inner) - np.searchsorted(inner[::-1], a, side="left")
        picks = ids[idx]
    return int(picks[0]) if size is None else picks


def dbr_transmit_prob(deg: float, mean_deg: float, p_max: float) -> float:
    """p_max / (1 + exp(-(deg - mean_deg)))."""
    if not 0 < p_max <= 1:
        raise ValueError(f"p_max must lie in (0, 1], got {p_max}")
    return float(p_max * expit(deg - mean_deg))


def _walk(graph, beacon, source, choose) -> list[int]:
    if not 0 <= source < graph.n:
        raise ValueError(f"unknown source id {source}")
    if not beacon.reachable(source):
        raise RoutingError(f"source {source} is not reachable from base station {beacon.bs}")
    path = [source]
    node = source
    while node != beacon.bs:
        node = choose(beacon.candidates[node])
        path.append(node)
    return path


def secure_flags(hops, graph: NetworkGraph) -> tuple[bool, ...]:
    """Per transmitting hop: does some other node sit inside its detection radius?"""
    return tuple(len(graph.detection_adjacency[h]) >= 1 for h in list(hops)[:-1])


def dbr_route(
    graph: NetworkGraph, beacon: BeaconState, source: int, p_max: float, rng: np.random.Generator
) -> Route:
    hops = _walk(graph, beacon, source, lambda c: dbr_select_relay(c, rng))
    deg = graph.degree
    mean = graph.mean_degree
    probs = tuple(dbr_transmit_prob(deg[h], mean, p_max) for h in hops[:-1])
    return Route(tuple(hops), probs, secure_flags(hops, graph))


def gbr_route(
    graph: NetworkGraph, beacon: BeaconState, source: int, rng: np.random.Generator,
    p_max: float = 0.25,
) -> Route:
    """Baseline: uniform choice among the lower-hop neighbours, constant p_max."""
    check_probability("p_max", p_max)
    hops = _walk(graph, beacon, source, lambda c: c[int(rng.integers(len(c)))][0])
    return Route(tuple(hops), (p_max,) * (len(hops) - 1), secure_flags(hops, graph))


def secure_relay_ratio(route: Route, graph: NetworkGraph) -> float:
    """Fraction of transmitting hops that are secure; 1 for a route with none."""
    flags = secure_flags(route.hops, graph)
    if not flags:
        return 1.0
    return sum(flags) / len(flags)
