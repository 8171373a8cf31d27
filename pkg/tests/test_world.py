import math

import numpy as np
import pytest

import ftmp
from ftmp.errors import (EmptyRoster, InvalidGeometry, PlacementFailure,
                         UnknownLabel)


def test_ring_count_and_chord():
    ring = ftmp.build_boundary_ring(98.0, 0.99, 2.0)
    assert len(ring) == 308  # ceil(2*pi*98 / 2) = ceil(307.876...)
    chord = np.linalg.norm(ring[0].position - ring[1].position)
    assert chord == pytest.approx(2 * 98.0 * math.sin(math.pi / 308), rel=1e-12)
    assert chord <= 2.0


def test_ring_on_circle_with_uniform_chords():
    ring = ftmp.build_boundary_ring(10.0, 0.4, 1.0, start_id=5)
    radii = [np.linalg.norm(a.position) for a in ring]
    assert radii == pytest.approx([10.0] * len(ring), rel=1e-12)
    chords = [np.linalg.norm(ring[k].position - ring[(k + 1) % len(ring)].position)
              for k in range(len(ring))]
    assert max(chords) - min(chords) < 1e-9
    assert [a.id for a in ring] == list(range(5, 5 + len(ring)))
    assert all(a.kind == ftmp.STATIC for a in ring)


def test_ring_rotation_covariance():
    ring = ftmp.build_boundary_ring(10.0, 0.4, 1.0)
    m = len(ring)
    th = 2 * math.pi / m
    Q = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    rotated = np.array([Q @ a.position for a in ring])
    original = np.array([a.position for a in ring])
    # rotating by one slot permutes the ring
    assert np.allclose(rotated, np.roll(original, -1, axis=0), atol=1e-9)


def test_ring_geometry_errors():
    with pytest.raises(InvalidGeometry):
        ftmp.build_boundary_ring(0.5, 0.99, 2.0)
    with pytest.raises(InvalidGeometry):
        ftmp.build_boundary_ring(98.0, 1.2, 2.0)


def test_nearest_neighbor_basic():
    me = ftmp.kinetic_state(0, [0.0, 0.0], [1.0, 1.0])
    near = ftmp.kinetic_state(1, [3.0, 0.0], [0.0, 0.0])
    far = ftmp.kinetic_state(2, [0.0, 5.0], [0.0, 0.0])
    assert ftmp.nearest_neighbor(me, [far, near]).id == 1


def test_nearest_neighbor_tie_breaks_to_lowest_id():
    me = ftmp.kinetic_state(0, [0.0, 0.0], [1.0, 1.0])
    a = ftmp.kinetic_state(7, [3.0, 0.0], [0.0, 0.0])
    b = ftmp.kinetic_state(2, [-3.0, 0.0], [0.0, 0.0])
    assert ftmp.nearest_neighbor(me, [a, b]).id == 2


def test_nearest_neighbor_prefers_wall_when_closest():
    scenario = ftmp.preset("example1", seed=1)
    cfg = scenario.config
    hugger = ftmp.kinetic_state(99, [96.5, 0.0], [0.0, 0.0])
    others = [a for a in cfg.agents]
    found = ftmp.nearest_neighbor(hugger, others)
    assert found.kind == ftmp.STATIC


def test_nearest_neighbor_empty():
    me = ftmp.kinetic_state(0, [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(EmptyRoster):
        ftmp.nearest_neighbor(me, [])


def test_preset_example1_parameters():
    scenario = ftmp.preset("example1")
    cfg = scenario.config
    assert cfg.N == 4
    assert cfg.barrier.d_c == 2.0
    assert cfg.barrier.epsilon == 1e4
    assert cfg.control.alpha == pytest.approx(1.0 / 3.0)
    assert cfg.control.k1 == 1.0
    assert cfg.R == 98.0 and cfg.r == 0.99
    assert ftmp.DEFAULT_DT["example1"] == 1e-3


def test_preset_example2_parameters():
    scenario = ftmp.preset("example2")
    assert scenario.config.N == 20
    assert scenario.config.M == 308
    assert ftmp.DEFAULT_DT["example2"] == 2e-3
    assert ftmp.validate_config(scenario.config) == []


def test_preset_unknown_label():
    with pytest.raises(UnknownLabel):
        ftmp.preset("example3")


def test_preset_deterministic():
    a = ftmp.preset("example1", seed=4)
    b = ftmp.preset("example1", seed=4)
    pa = np.array([ag.position for ag in a.config.agents])
    pb = np.array([ag.position for ag in b.config.agents])
    assert np.array_equal(pa, pb)


def test_random_scenario_deterministic():
    a = ftmp.random_scenario(4, seed=42)
    b = ftmp.random_scenario(4, seed=42)
    pa = np.array([ag.position for ag in a.config.agents])
    pb = np.array([ag.position for ag in b.config.agents])
    assert np.array_equal(pa, pb)
    assert a.label == "random"


def test_random_scenario_single_agent():
    scenario = ftmp.random_scenario(1, seed=3)
    assert scenario.config.N == 1
    assert ftmp.validate_config(scenario.config) == []


def test_random_scenario_respects_margins():
    scenario = ftmp.random_scenario(12, seed=8)
    kin = scenario.config.kinetic_agents()
    d_c = scenario.config.barrier.d_c
    pos = np.array([a.position for a in kin])
    goals = np.array([a.goal for a in kin])
    for pts in (pos, goals):
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff ** 2).sum(-1))
        dist[np.arange(len(kin)), np.arange(len(kin))] = np.inf
        assert dist.min() > 2.0 * d_c


def test_random_scenario_packing_failure():
    with pytest.raises(PlacementFailure):
        ftmp.random_scenario(100_000, seed=0)


def test_rotate_scenario_maps_all_vectors():
    scenario = ftmp.preset("example1", seed=1)
    Q = np.array([[0.0, -1.0], [1.0, 0.0]])
    rotated = ftmp.rotate_scenario(scenario, Q)
    for a, b in zip(scenario.config.agents, rotated.config.agents):
        assert np.array_equal(b.position, Q @ a.position)
        assert np.array_equal(b.goal, Q @ a.goal)
        assert b.id == a.id and b.kind == a.kind
    assert rotated.label == scenario.label


def test_make_scenario_rejects_invalid():
    with pytest.raises(InvalidGeometry):
        # two agents on top of each other
        ftmp.make_scenario([[0.0, 0.0], [0.0, 0.0]], [[5.0, 0.0], [0.0, 5.0]],
                           label="bad")
