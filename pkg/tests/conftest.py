"""Shared fixtures; the expensive closed-loop runs are session-scoped.

BUILD_SECONDS records how long each shared artifact took to produce so the
acceptance tests can enforce their runtime budgets even when a fixture was
materialized earlier in the session.
"""
import time

import pytest

import ftmp

BUILD_SECONDS = {}


def _timed(key, fn):
    t0 = time.monotonic()
    out = fn()
    BUILD_SECONDS[key] = time.monotonic() - t0
    return out


@pytest.fixture(scope="session")
def canonical_bp():
    return ftmp.BarrierParams(d_c=2.0, epsilon=1e4)


@pytest.fixture(scope="session")
def canonical_cp():
    return ftmp.ControlParams(k1=1.0, alpha=1.0 / 3.0)


@pytest.fixture(scope="session")
def single_agent_scenario():
    """One kinetic agent heading to the origin past a dedicated static agent."""
    return ftmp.make_scenario([[10.0, 0.0]], [[0.0, 0.0]], label="single",
                              extra_static=[[25.0, 0.0]])


@pytest.fixture(scope="session")
def halving_records(single_agent_scenario):
    """The same scenario integrated at dt, dt/2 and dt/4."""
    def build():
        return {dt: ftmp.run(single_agent_scenario,
                             ftmp.SimConfig(dt=dt, t_max=50.0))
                for dt in (1e-3, 5e-4, 2.5e-4)}
    return _timed("halving", build)


@pytest.fixture(scope="session")
def example1_record():
    scenario = ftmp.preset("example1", seed=1)
    return _timed("example1",
                  lambda: ftmp.run(scenario, ftmp.SimConfig(dt=1e-3, t_max=50.0)))


@pytest.fixture(scope="session")
def example2_record():
    scenario = ftmp.preset("example2", seed=1)
    return _timed("example2",
                  lambda: ftmp.run(scenario, ftmp.SimConfig(dt=2e-3, t_max=50.0)))


@pytest.fixture(scope="session")
def two_agent_record():
    """Two agents with crossing transits, small arena, short horizon."""
    scenario = ftmp.make_scenario([[-8.0, 0.0], [8.0, 0.5]],
                                  [[8.0, 1.0], [-8.0, -0.5]],
                                  label="crossing", R=30.0)
    return ftmp.run(scenario, ftmp.SimConfig(dt=1e-3, t_max=40.0))
