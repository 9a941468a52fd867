import pytest

from mmrclimate import (
    build_policy_set,
    build_states,
    load_config,
    regret_matrix,
)


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="session")
def scenario(config):
    return config.to_scenario()


@pytest.fixture(scope="session")
def default_matrix(config, scenario):
    """Full 42 x 43 regret matrix for the bundled middle case."""
    states = build_states(config.deltas, config.ensemble)
    policies = build_policy_set(config.deltas, config.ensemble, scenario)
    return regret_matrix(policies, states, scenario)
