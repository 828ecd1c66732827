"""Shared fixtures: small scenario configs that keep end-to-end tests fast."""

import dataclasses

import pytest

from bubblesim.config import ScenarioConfig


@pytest.fixture
def tiny_cfg():
    """Two simulated minutes with a dozen agents; runs in well under a second."""
    cfg = ScenarioConfig(seed=7, horizon_s=120.0, snapshot_interval_s=1.0,
                         mtm_interval_s=30.0)
    population = dataclasses.replace(cfg.population, n_mean_reverting=8,
                                     n_speculators=4)
    return dataclasses.replace(cfg, population=population)
