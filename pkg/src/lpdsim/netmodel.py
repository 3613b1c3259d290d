"""Dense-network generation, dual-radius graphs and connected components."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "Placement",
    "Region",
    "Node",
    "NetworkGraph",
    "UnionFind",
    "generate_nodes",
    "build_graph",
    "connected_components",
    "largest_component_fraction",
    "shadow_density_threshold",
]


class Placement(enum.Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"
    PPP = "ppp"


class Layer(enum.Enum):
    DETECTION = "detect"
    COMM = "comm"


@dataclass(frozen=True)
class Region:
    width: float = 200.0
    height: float = 100.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("region must have positive width and height")

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float


def _reflect(values: np.ndarray, length: float) -> np.ndarray:
    # fold onto [0, length] by mirroring at both walls
    period = np.mod(values, 2.0 * length)
    return np.where(period > length, 2.0 * length - period, period)


def generate_nodes(
    placement: Placement | str,
    region: Region,
    rng: np.random.Generator,
    *,
    n: int | None = None,
    density: float | None = None,
    clusters: int = 6,
    spread: float = 12.0,
) -> np.ndarray:
    """Draw node positions inside ``region``; returns an ``(n, 2)`` array.

    ``uniform`` and ``clustered`` take a node count ``n``; ``ppp`` takes an
    intensity ``density`` (nodes per square meter). Clustered nodes are
    assigned round-robin to ``clusters`` uniform centres with isotropic
    Gaussian offsets of standard deviation ``spread``; offsets that leave
    the region are mirrored back in at the walls.
    """
    placement = Placement(placement)
    size = np.array([region.width, region.height])
    if placement is Placement.PPP:
        if density is None or density < 0:
            raise ValueError("ppp placement needs a non-negative density")
        n = int(rng.poisson(density * region.area))
        return rng.random((n, 2)) * size
    if n is None or n < 0:
        raise ValueError(f"{placement.value} placement needs a node count n >= 0")
    if placement is Placement.UNIFORM:
        return rng.random((n, 2)) * size
    if clusters < 1:
        raise ValueError(f"clusters must be >= 1, got {clusters}")
    if not spread > 0:
        raise ValueError(f"spread must be > 0, got {spread}")
    centres = rng.random((clusters, 2)) * size
    owner = np.arange(n) % clusters
    raw = centres[owner] + rng.normal(0.0, spread, (n, 2))
    return np.column_stack([_reflect(raw[:, 0], region.width), _reflect(raw[:, 1], region.height)])


def _pairs_within(points: np.ndarray, radius: float) -> np.ndarray:
    if len(points) < 2:
        return np.empty((0, 2), dtype=np.int64)
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray")
    if pairs.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    diff = points[pairs[:, 0]] - points[pairs[:, 1]]
    # query_pairs is inclusive; links need distance strictly below the radius
    keep = np.einsum("ij,ij->i", diff, diff) < radius * radius
    pairs = np.sort(pairs[keep], axis=1)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def _adjacency(n: int, pairs) -> list[frozenset[int]]:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in pairs:
        u, v = int(u), int(v)
        if u == v:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
    return [frozenset(s) for s in nbrs]


@dataclass(frozen=True)
class NetworkGraph:
    """Node positions with a detection layer and a communication layer.

    Degrees (``degree``, ``mean_degree``) refer to the communication layer.
    """

    positions: np.ndarray
    detection_radius: float
    comm_radius: float
    detection_adjacency: list[frozenset[int]] = field(repr=False)
    comm_adjacency: list[frozenset[int]] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        positions,
        comm_edges,
        detect_edges=(),
        detection_radius: float = math.nan,
        comm_radius: float = math.nan,
    ) -> "NetworkGraph":
        """Graph with explicit edge lists, for hand-built topologies."""
        pos = np.asarray(positions, dtype=float).reshape(-1, 2)
        n = len(pos)
        return cls(pos, detection_radius, comm_radius,
                   _adjacency(n, detect_edges), _adjacency(n, comm_edges))

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def nodes(self) -> list[Node]:
        return [Node(i, float(x), float(y)) for i, (x, y) in enumerate(self.positions)]

    @property
    def degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.comm_adjacency], dtype=np.int64)

    @property
    def detection_degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.detection_adjacency], dtype=np.int64)

    @property
    def mean_degree(self) -> float:
        return float(self.degree.mean()) if self.n else 0.0

    def adjacency(self, layer: Layer | str) -> list[frozenset[int]]:
        layer = Layer(layer)
        return self.comm_adjacency if layer is Layer.COMM else self.detection_adjacency

    def edges(self, layer: Layer | str) -> list[tuple[int, int]]:
        adj = self.adjacency(layer)
        return [(u, v) for u in range(self.n) for v in sorted(adj[u]) if u < v]


def build_graph(positions, detection_radius: float, comm_radius: float) -> NetworkGraph:
    """Link every pair closer than each radius (strictly)."""
    if not (detection_radius > 0 and comm_radius > 0):
        raise ValueError("radii must be positive")
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(pos)
    return NetworkGraph(
        pos,
        float(detection_radius),
        float(comm_radius),
        _adjacency(n, _pairs_within(pos, detection_radius)),
        _adjacency(n, _pairs_within(pos, comm_radius)),
    )


class UnionFind:
    """Disjoint sets over 0..n-1; the root of each set is its smallest member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo
        return lo


def connected_components(graph: NetworkGraph, which: Layer | str = Layer.DETECTION) -> list[list[int]]:
    """Partition of node ids into components, each sorted, ordered by smallest id."""
    uf = UnionFind(graph.n)
    for u, v in graph.edges(which):
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for i in range(graph.n):
        groups.setdefault(uf.find(i), []).append(i)
    return [groups[r] for r in sorted(groups)]


def largest_component_fraction(graph: NetworkGraph, which: Layer | str = Layer.DETECTION) -> float:
    if graph.n == 0:
        return 0.0
    return max(len(c) for c in connected_components(graph, which)) / graph.n


def shadow_density_threshold(d_aw: float) -> float:
    """Density 1 / (pi d^2) above which the warden cannot isolate a transmitter."""
    if not d_aw > 0:
        raise ValueError(f"d_aw must be > 0, got {d_aw}")
    return 1.0 / (math.pi * d_aw * d_aw)
