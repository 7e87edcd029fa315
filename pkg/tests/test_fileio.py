"""Graph/schedule JSON and trajectory CSV round trips."""

import json

import numpy as np
import pytest

from ntconsensus import (
    FileFormatError,
    bundled_graph,
    bundled_path,
    design_fixed,
    integrate_fixed,
    load_graph,
    load_schedule,
    read_trajectory_csv,
    save_graph,
    write_trajectory_csv,
)
from ntconsensus.networks import BUNDLED_V1
from ntconsensus import Decomposition

from conftest import random_directed_valid, random_undirected_valid


class TestGraphRoundTrip:
    def test_bundled_files_match_builders(self):
        for name in ("net_a", "net_a_weak", "net_b", "net_c"):
            loaded = load_graph(bundled_path(f"{name}.json"))
            built = bundled_graph(name)
            assert loaded.n == built.n and loaded.d == built.d
            assert set(loaded.weights) == set(built.weights)
            for key, w in built.weights.items():
                assert np.allclose(loaded.weights[key].entries, w.entries)

    def test_directed_round_trip(self, tmp_path, rng):
        g, _ = random_directed_valid(rng, 5, 3)
        p = tmp_path / "g.json"
        save_graph(g, p)
        back = load_graph(p)
        assert set(back.weights) == set(g.weights)
        for key, w in g.weights.items():
            assert np.allclose(back.weights[key].entries, w.entries, atol=1e-15)

    def test_undirected_round_trip_single_listing(self, tmp_path, rng):
        g, _ = random_undirected_valid(rng, 4, 2)
        p = tmp_path / "g.json"
        save_graph(g, p)
        data = json.loads(p.read_text())
        # each unordered pair appears once on disk
        assert len(data["edges"]) == len(g.weights) // 2
        back = load_graph(p)
        assert set(back.weights) == set(g.weights)

    def test_malformed_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(FileFormatError):
            load_graph(p)

    def test_missing_fields(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"n": 2, "d": 2}))
        with pytest.raises(FileFormatError):
            load_graph(p)

    def test_wrong_weight_shape(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({
            "n": 2, "d": 3, "directed": True,
            "edges": [{"from": 1, "to": 2, "weight": [[1.0]]}],
        }))
        with pytest.raises(FileFormatError):
            load_graph(p)


class TestScheduleLoading:
    def test_bundled_cycle(self):
        s = load_schedule(bundled_path("cycle_schedule.json"))
        assert s.alpha == pytest.approx(0.02)
        assert s.graph_ids == (0, 0, 1, 2, 2)
        assert s.repeat

    def test_dt_list(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(json.dumps({
            "alpha": 0.1, "pattern": [0, 1, 0], "dt": [0.1, 0.2, 0.1],
        }))
        s = load_schedule(p)
        assert s.switch_times == (0.0, 0.1, pytest.approx(0.3))

    def test_dt_list_length_mismatch(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(json.dumps({"alpha": 0.1, "pattern": [0, 1], "dt": [0.1]}))
        with pytest.raises(FileFormatError):
            load_schedule(p)


class TestTrajectoryCsv:
    def test_round_trip_full_precision(self, tmp_path):
        g = bundled_graph("net_a")
        dec = Decomposition.of(g, BUNDLED_V1["net_a"])
        design = design_fixed(g, dec, np.array([1.0, 2.0, -1.0]))
        rng = np.random.default_rng(0)
        traj = integrate_fixed(g, design, rng.uniform(-5, 5, 21), h=1e-2, horizon=0.1)
        p = tmp_path / "traj.csv"
        write_trajectory_csv(traj, p)
        header = p.read_text().splitlines()[0]
        assert header.startswith("t,x1_1,x1_2,x1_3,x2_1")
        assert header.endswith("x7_3,errnorm")
        data = read_trajectory_csv(p)
        assert np.array_equal(data[:, 0], traj.times)
        assert np.array_equal(data[:, 1:-1], traj.states)
        assert np.array_equal(data[:, -1], traj.error_norm)
