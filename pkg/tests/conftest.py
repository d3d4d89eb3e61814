from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
CONFIGS = REPO / "configs"


@pytest.fixture(scope="session")
def tiny_config():
    return CONFIGS / "tiny"


@pytest.fixture(scope="session")
def tiny_scenario(tiny_config):
    from sinkplan import load_config

    scenario, _ = load_config(tiny_config)
    return scenario


@pytest.fixture(scope="session")
def tiny_grid(tiny_config):
    from sinkplan import load_config

    _, grid = load_config(tiny_config)
    return grid


@pytest.fixture(scope="session")
def tiny_solved(tiny_scenario):
    from sinkplan import solve_scenario

    return solve_scenario(tiny_scenario)


@pytest.fixture(scope="session")
def tiny_solved_nosink(tiny_scenario):
    from sinkplan import solve_scenario

    return solve_scenario(tiny_scenario.without_sink())
