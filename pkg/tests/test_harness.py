import numpy as np
import pytest

from lpdsim.channel import ChannelScenario
from lpdsim.config import ConfigError, ExperimentKind, load_preset, parse_config
from lpdsim.export import format_value, network_csvs, table_csv
from lpdsim.harness import (
    DetectionSetup,
    RoutedNetwork,
    map_trials,
    run_detection_trials,
    run_experiment,
    run_sweep,
    secure_ratio_point,
    trial_rng,
)
from lpdsim.netmodel import NetworkGraph, Placement, build_graph
from lpdsim.routing import beacon_flood, dbr_route
from lpdsim.warden import WardenWalk

SC = ChannelScenario(alice_power=1000.0)


def _square(i):
    return i * i


class TestStreams:
    def test_trial_rng_depends_on_key_only(self):
        a = trial_rng(42, 0, 5).random(4)
        assert np.array_equal(a, trial_rng(42, 0, 5).random(4))
        assert not np.array_equal(a, trial_rng(42, 0, 6).random(4))
        assert not np.array_equal(a, trial_rng(43, 0, 5).random(4))

    def test_map_trials_order(self):
        assert map_trials(_square, 10, threads=1) == [i * i for i in range(10)]
        assert map_trials(_square, 10, threads=2) == [i * i for i in range(10)]


class TestDetectionTrials:
    SETUP = DetectionSetup(SC, WardenWalk(t=10, m=20, spacing=0.3), 0.5, 0.05)

    def test_single_trial_repeatable(self):
        a = run_detection_trials(self.SETUP, 1, seed=7)
        b = run_detection_trials(self.SETUP, 1, seed=7)
        assert a.statistics.tolist() == b.statistics.tolist()
        assert a.h1_rate == b.h1_rate

    def test_threads_do_not_change_results(self):
        a = run_detection_trials(self.SETUP, 40, seed=7, threads=1)
        b = run_detection_trials(self.SETUP, 40, seed=7, threads=2)
        assert np.array_equal(a.statistics, b.statistics)
        assert np.array_equal(a.decisions, b.decisions)

    def test_summary(self):
        res = run_detection_trials(self.SETUP, 200, seed=1)
        assert res.h1_rate == res.decisions.mean()
        assert res.mean_statistic == pytest.approx(res.statistics.mean())
        assert res.stderr == pytest.approx(np.sqrt(res.h1_rate * (1 - res.h1_rate) / 200))

    def test_trials_domain(self):
        with pytest.raises(ValueError):
            run_detection_trials(self.SETUP, 0, seed=1)


class TestSweeps:
    def test_sweep_p_zero_row(self):
        cfg = parse_config(overrides={
            "experiment.kind": "sweep-p", "experiment.trials": "5",
            "sweep.t_values": "30", "sweep.p_values": "0, 0.1", "warden.m": "10",
        })
        table = run_sweep(cfg)
        assert table.columns == ["t", "p", "p_threshold", "expected_statistic_approx",
                                 "expected_statistic_exact", "h1_rate_empirical"]
        row = table.rows[0]
        assert row[1] == 0.0
        assert row[3] == 15.0
        assert row[4] == pytest.approx(15.0)

    def test_sweep_t_contains_boundary(self):
        cfg = parse_config(overrides={
            "experiment.kind": "sweep-t", "experiment.trials": "3",
            "sweep.alphas": "3", "sweep.betas": "0.05", "sweep.t_values": "10", "warden.m": "10",
        })
        table = run_sweep(cfg)
        assert table.columns == ["alpha", "t", "beta_analytic", "h1_rate_empirical"]
        ts = [r[1] for r in table.rows]
        assert 4 in ts and 10 in ts
        beta4 = next(r[2] for r in table.rows if r[1] == 4)
        assert beta4 < 0.05

    def test_secure_zero_nodes(self):
        cfg = parse_config(overrides={"experiment.kind": "secure-ratio", "experiment.trials": "3",
                                      "network.node_counts": "0"})
        table = run_sweep(cfg)
        assert table.columns == ["density", "placement", "router", "mean_secure_ratio",
                                 "stderr", "trials"]
        assert [r[3] for r in table.rows] == [1.0] * 4

    def test_secure_point_is_paired(self):
        cfg = parse_config(overrides={"experiment.trials": "6"})
        rows = secure_ratio_point(cfg, Placement.UNIFORM, 300)
        assert [r.router for r in rows] == ["dbr", "gbr"]
        assert all(0 <= r.mean_secure_ratio <= 1 and r.trials == 6 for r in rows)
        assert rows == secure_ratio_point(cfg, Placement.UNIFORM, 300, threads=2)

    def test_not_a_sweep(self):
        with pytest.raises(ValueError):
            run_sweep(parse_config())

    def test_detect_once(self):
        cfg = parse_config(overrides={"experiment.trials": "20", "schedule.transmit_prob": "1"})
        table = run_experiment(cfg)
        assert table.rows[0][6] == 1.0


class TestConfig:
    def test_db_conversion(self):
        cfg = parse_config("[channel]\nalice_power_db = 30\nnoise_power_db = 0\n")
        assert cfg.alice_power == pytest.approx(1000.0)
        assert cfg.noise_power == pytest.approx(1.0)

    def test_overrides_beat_file(self):
        cfg = parse_config("[experiment]\nseed = 1\n", {"experiment.seed": "9"})
        assert cfg.seed == 9

    @pytest.mark.parametrize("text", [
        "[channel]\nbogus = 1\n",
        "[experiment]\ntrials = 0\n",
        "[experiment]\nseed = -1\n",
        "[network]\nrouter = ospf\n",
        "[detector]\nmode = fuzzy\n",
        "not ini at all",
    ])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    @pytest.mark.parametrize("name", ["fig3", "fig6", "fig12"])
    def test_presets_parse(self, name):
        cfg = parse_config(load_preset(name))
        assert cfg.seed == 42
        assert cfg.kind in (ExperimentKind.SWEEP_T, ExperimentKind.SWEEP_P,
                            ExperimentKind.SECURE_RATIO_SWEEP)

    def test_digest_tracks_values(self):
        assert parse_config().digest() == parse_config().digest()
        assert parse_config().digest() != parse_config(overrides={"experiment.seed": "1"}).digest()


class TestExport:
    def test_format(self):
        assert format_value(1 / 3) == "0.333333333"
        assert format_value(True) == "1"
        assert format_value(np.int64(7)) == "7"
        assert format_value(None) == ""

    def test_table_comment(self):
        from lpdsim.harness import Table

        text = table_csv(Table(["a"], [[0.5]]), comment="seed=1")
        assert text.splitlines() == ["# seed=1", "a", "0.5"]

    def test_empty_graph(self):
        g = build_graph(np.empty((0, 2)), 5, 20)
        nodes, edges = network_csvs(g)
        assert nodes == "id,x,y,deg_comm,deg_detect\n"
        assert edges == "src,dst,kind\n"

    def test_chain(self):
        g = build_graph([[0, 0], [4, 0], [8, 0]], 5, 20)
        _, edges = network_csvs(g)
        lines = edges.splitlines()[1:]
        assert [ln for ln in lines if ln.endswith("detect")] == ["0,1,detect", "1,2,detect"]
        assert lines == sorted(lines, key=lambda ln: tuple(int(x) for x in ln.split(",")[:2]))

    def test_route_overlay(self):
        g = NetworkGraph.from_edges([[0, 0], [10, 0], [20, 0], [50, 50]],
                                    comm_edges=[(0, 1), (1, 2)])
        route = dbr_route(g, beacon_flood(g, 0), 2, 0.25, np.random.default_rng(0))
        nodes, _ = network_csvs(g, route)
        rows = [ln.split(",") for ln in nodes.splitlines()]
        hop = rows[0].index("hop_index")
        assert [r[hop] for r in rows[1:]] == ["2", "1", "0", ""]


def test_routed_network_ids():
    cfg = parse_config()
    from lpdsim.harness import single_network

    net = single_network(cfg, with_endpoints=True)
    assert isinstance(net, RoutedNetwork)
    assert tuple(net.graph.positions[0]) == (0.0, 50.0)
    assert tuple(net.graph.positions[1]) == (200.0, 50.0)
    assert net.graph.n == 302
    assert net.beacon.reachable(1)
