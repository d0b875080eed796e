"""Shared fixtures: invariant checks on, bundled scenarios, a small corridor network."""

import os
import sys
from pathlib import Path

# Invariant assertions are part of the test profile
os.environ["CHECK_INVARIANTS"] = "true"

sys.path.append(str(Path(__file__).parent.parent))

import pytest

from src.core.config import SCENARIO_DIR
from src.fixed.vehicles import VehicleType
from src.network.network import Network, RoadLink, RunningTimeDistribution, Stop
from src.scenario.loader import build_world, parse_scenario


def corridor(stop_ids, length=1000.0, seconds=100.0, tags=None):
    """Bidirectional chain of stops with constant running times."""
    tags = tags or {}
    stops = {s: Stop(s, s, tag=tags.get(s)) for s in stop_ids}
    links = {}
    for a, b in zip(stop_ids[:-1], stop_ids[1:]):
        for x, y in ((a, b), (b, a)):
            links[f"{x}{y}"] = RoadLink(f"{x}{y}", x, y, length, RunningTimeDistribution("constant", seconds))
    return Network(stops, links)


@pytest.fixture
def corridor_net():
    return corridor(["A", "B", "C", "D"])


@pytest.fixture
def bus():
    return VehicleType("bus", capacity=3, seats=2)


@pytest.fixture(scope="session")
def toy_config():
    return parse_scenario(SCENARIO_DIR / "toy.yaml")


@pytest.fixture(scope="session")
def branched_config():
    return parse_scenario(SCENARIO_DIR / "branched.yaml")


@pytest.fixture(scope="session")
def toy_world(toy_config):
    return build_world(toy_config, "flex1")


@pytest.fixture(scope="session")
def branched_world(branched_config):
    return build_world(branched_config)


@pytest.fixture
def make_corridor():
    return corridor
