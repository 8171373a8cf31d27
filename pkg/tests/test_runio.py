import json

import numpy as np
import pytest

import ftmp
from ftmp import runio


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    scenario = ftmp.random_scenario(2, seed=11)
    record = ftmp.run(scenario, ftmp.SimConfig(dt=1e-3, t_max=3.0))
    out = tmp_path_factory.mktemp("run")
    manifest = runio.write_run(record, out, {"n": 2, "overrides": None})
    return record, out, manifest


def test_written_files_exist(small_run):
    _, out, manifest = small_run
    for name in (runio.TRAJECTORIES, runio.DISTANCES, runio.EVENTS,
                 runio.MANIFEST, runio.DISTANCE_PLOT, runio.SNAPSHOT_PLOT):
        assert (out / name).exists()
        assert name in manifest["outputs"]


def test_csv_round_trip_exact(small_run):
    record, out, manifest = small_run
    back, manifest2 = runio.read_run(out)
    assert np.array_equal(back.times, record.times)
    assert np.array_equal(back.positions, record.positions)
    assert np.array_equal(back.velocities, record.velocities)
    assert np.array_equal(back.pairwise_min, record.pairwise_min)
    assert np.array_equal(back.step_neighbor_ids, record.step_neighbor_ids)
    assert np.array_equal(back.step_guards, record.step_guards)
    assert back.events == record.events
    assert back.digest() == manifest["record_digest"]


def test_manifest_contents(small_run):
    record, out, manifest = small_run
    par = manifest["parameters"]
    assert manifest["label"] == "random"
    assert par["N"] == 2 and par["dt"] == 1e-3
    assert par["epsilon"] == 1e4 and par["d_c"] == 2.0
    assert manifest["record_digest"] == record.digest()
    on_disk = json.loads((out / runio.MANIFEST).read_text())
    assert on_disk["record_digest"] == manifest["record_digest"]


def test_static_agents_only_in_first_block(small_run):
    record, out, _ = small_run
    lines = (out / runio.TRAJECTORIES).read_text().splitlines()
    t0 = repr(0.0)
    static_rows = [ln for ln in lines[1:] if ln.split(",")[2] == ftmp.STATIC]
    assert len(static_rows) == record.scenario.config.M
    assert all(ln.split(",")[0] == t0 for ln in static_rows)


def test_distances_min_column_matches_record(small_run):
    record, out, _ = small_run
    lines = (out / runio.DISTANCES).read_text().splitlines()[1:]
    mins = {}
    for ln in lines:
        t, _, _, _, m = ln.split(",")
        mins[float(t)] = float(m)
    for k, t in enumerate(record.times):
        assert mins[float(t)] == record.pairwise_min[k]


def test_writes_are_byte_stable(small_run, tmp_path):
    record, out, _ = small_run
    runio.write_trajectories(record, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == \
        (out / runio.TRAJECTORIES).read_bytes()


def test_rebuild_scenario_round_trip(small_run):
    _, out, manifest = small_run
    rebuilt = runio.rebuild_scenario(manifest)
    original = ftmp.random_scenario(2, seed=11)
    pa = np.array([a.position for a in rebuilt.config.agents])
    pb = np.array([a.position for a in original.config.agents])
    assert np.array_equal(pa, pb)
