import pytest

from minispec.clock import SimClock
from minispec.default_skills import build_default_registry
from minispec.runtime import RunControl, SkillDispatcher
from minispec.world import SimBackend, load_world

SIMPLE_WORLD = """
{
  "drone": {"x": 0, "y": 0, "z": 100, "yaw": 0},
  "objects": [
    {"name": "chair", "pos": [0, 200, 100], "extent": [60, 80],
     "color": "brown"},
    {"name": "apple", "pos": [40, 150, 100], "extent": [8, 8],
     "color": "red", "attrs": ["edible", "sweet"]}
  ]
}
"""


@pytest.fixture(scope="session")
def registry():
    return build_default_registry()


@pytest.fixture
def world():
    return load_world(SIMPLE_WORLD, "simple")


@pytest.fixture
def ctl():
    return RunControl(clock=SimClock())


@pytest.fixture
def backend(world, ctl):
    be = SimBackend(world, ctl)
    be.probe = lambda question: "False"
    return be


@pytest.fixture
def dispatcher(registry, backend):
    return SkillDispatcher(registry, backend)
