import math

import numpy as np
import pytest
from scipy import stats

from lpdsim.netmodel import (
    Layer,
    NetworkGraph,
    Placement,
    Region,
    UnionFind,
    build_graph,
    connected_components,
    generate_nodes,
    largest_component_fraction,
    shadow_density_threshold,
)

from oracles import all_pairs_edges

REGION = Region(200.0, 100.0)


class TestGenerate:
    def test_ppp_empty(self):
        pts = generate_nodes(Placement.PPP, REGION, np.random.default_rng(0), density=0.0)
        assert pts.shape == (0, 2)

    def test_ppp_mean_count(self):
        rng = np.random.default_rng(1)
        counts = [len(generate_nodes("ppp", REGION, rng, density=0.015)) for _ in range(1000)]
        assert abs(np.mean(counts) - 300) <= 3 * math.sqrt(300)

    @pytest.mark.parametrize("placement", ["uniform", "clustered"])
    def test_count_and_bounds(self, placement):
        pts = generate_nodes(placement, REGION, np.random.default_rng(2), n=300)
        assert pts.shape == (300, 2)
        assert np.all((pts >= 0) & (pts <= [200, 100]))

    @pytest.mark.parametrize("kw", [
        dict(placement="uniform", n=-1),
        dict(placement="uniform"),
        dict(placement="ppp", density=-1.0),
        dict(placement="clustered", n=10, clusters=0),
        dict(placement="clustered", n=10, spread=0.0),
    ])
    def test_domain(self, kw):
        placement = kw.pop("placement")
        with pytest.raises(ValueError):
            generate_nodes(placement, REGION, np.random.default_rng(0), **kw)

    def test_bad_region(self):
        with pytest.raises(ValueError):
            Region(0.0, 10.0)

    def test_clustered_round_robin(self):
        # tiny spread keeps each node next to its centre
        pts = generate_nodes("clustered", REGION, np.random.default_rng(3), n=12, clusters=3,
                             spread=1e-6)
        for k in range(3):
            group = pts[k::3]
            assert np.ptp(group, axis=0).max() < 1e-3

    def test_wide_clusters_look_uniform(self):
        diag = math.hypot(REGION.width, REGION.height)
        rng = np.random.default_rng(4)
        wide = generate_nodes("clustered", REGION, rng, n=3000, spread=10 * diag)
        flat = generate_nodes("uniform", REGION, rng, n=3000)
        for axis in (0, 1):
            assert stats.ks_2samp(wide[:, axis], flat[:, axis]).pvalue > 0.01


class TestBuildGraph:
    def test_close_pair(self):
        g = build_graph([[0, 0], [3, 0]], 5, 20)
        assert g.edges(Layer.DETECTION) == [(0, 1)]

    def test_boundary_is_excluded(self):
        g = build_graph([[0, 0], [5, 0]], 5, 20)
        assert g.edges("detect") == []
        assert g.edges("comm") == [(0, 1)]

    def test_chain(self):
        g = build_graph([[0, 0], [4, 0], [8, 0]], 5, 20)
        assert g.edges("detect") == [(0, 1), (1, 2)]
        assert list(g.degree) == [2, 2, 2]
        assert list(g.detection_degree) == [1, 2, 1]
        assert g.mean_degree == 2.0

    def test_coincident_nodes_are_adjacent(self):
        g = build_graph([[1, 1], [1, 1]], 5, 20)
        assert g.edges("detect") == [(0, 1)]

    def test_radius_domain(self):
        with pytest.raises(ValueError):
            build_graph([[0, 0]], 0, 20)

    def test_empty(self):
        g = build_graph(np.empty((0, 2)), 5, 20)
        assert g.n == 0 and g.mean_degree == 0.0
        assert connected_components(g) == []

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 501))
        pts = generate_nodes(["uniform", "clustered"][seed % 2], REGION, rng, n=n)
        g = build_graph(pts, 5, 20)
        assert set(g.edges("detect")) == all_pairs_edges(pts, 5)
        assert set(g.edges("comm")) == all_pairs_edges(pts, 20)

    def test_lattice_ties(self):
        # integer lattice puts many pairs exactly on the radius
        xs, ys = np.meshgrid(np.arange(0, 30, 3.0), np.arange(0, 20, 4.0))
        pts = np.column_stack([xs.ravel(), ys.ravel()])
        g = build_graph(pts, 5, 20)
        assert set(g.edges("detect")) == all_pairs_edges(pts, 5)
        assert set(g.edges("comm")) == all_pairs_edges(pts, 20)

    def test_symmetric_irreflexive(self):
        g = build_graph(generate_nodes("uniform", REGION, np.random.default_rng(9), n=300), 5, 20)
        for layer in ("detect", "comm"):
            adj = g.adjacency(layer)
            for u, nbrs in enumerate(adj):
                assert u not in nbrs
                assert all(u in adj[v] for v in nbrs)

    def test_from_edges(self):
        g = NetworkGraph.from_edges([[0, 0]] * 3, comm_edges=[(0, 1), (1, 2)])
        assert list(g.degree) == [1, 2, 1]
        assert g.edges("detect") == []


class TestComponents:
    def test_chain_is_one(self):
        g = build_graph([[0, 0], [4, 0], [8, 0]], 5, 20)
        assert connected_components(g) == [[0, 1, 2]]

    def test_far_pair(self):
        g = build_graph([[0, 0], [10, 0]], 5, 20)
        assert connected_components(g, Layer.DETECTION) == [[0], [1]]
        assert connected_components(g, Layer.COMM) == [[0, 1]]

    def test_union_find_root_is_min(self):
        uf = UnionFind(6)
        uf.union(5, 3)
        uf.union(3, 4)
        uf.union(4, 1)
        assert {uf.find(i) for i in (1, 3, 4, 5)} == {1}
        assert uf.find(2) == 2

    def test_largest_component_grows_with_density(self):
        # below the threshold the fraction is dominated by small-n effects
        # (a 3-node cluster among 60 nodes), so the fraction is checked from
        # the threshold upward and the absolute size over the whole sweep
        base = shadow_density_threshold(5.0)
        factors = [0.25, 0.5, 1.0, 2.0, 4.0]
        sizes, fractions = [], []
        for j, f in enumerate(factors):
            size, frac = [], []
            for s in range(200):
                pts = generate_nodes("ppp", REGION, np.random.default_rng([s, j]), density=f * base)
                g = build_graph(pts, 5, 5)
                largest = max((len(c) for c in connected_components(g)), default=0)
                size.append(largest)
                frac.append(largest_component_fraction(g))
            sizes.append(np.mean(size))
            fractions.append(np.mean(frac))
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        assert all(a <= b for a, b in zip(fractions[2:], fractions[3:]))


class TestShadowThreshold:
    def test_values(self):
        assert shadow_density_threshold(5) == pytest.approx(0.0127324, abs=1e-6)
        assert shadow_density_threshold(1) == pytest.approx(0.3183099, abs=1e-6)

    @pytest.mark.parametrize("d", [0.1, 1.0, 7.5, 300.0])
    def test_scaling(self, d):
        assert shadow_density_threshold(2 * d) == pytest.approx(shadow_density_threshold(d) / 4)

    @pytest.mark.parametrize("d", [0.0, -1.0])
    def test_domain(self, d):
        with pytest.raises(ValueError):
            shadow_density_threshold(d)
