"""Shared fixtures: the benchmark scenario variants are expensive (10 s
wall-clock each), so they run once per session and every test reuses them."""

from __future__ import annotations

import numpy as np
import pytest

from etrc.acceptance import benchmark_runs
from etrc.config import apply_overrides, build_scenario, paper_config
from etrc.engine import run_scenario


@pytest.fixture(scope="session")
def benchmark():
    """Full-horizon benchmark runs: proposed, no_eid, static_petm, step."""
    return benchmark_runs()


@pytest.fixture(scope="session")
def benchmark_repeat(benchmark):
    """A second, independent run of the proposed variant (determinism)."""
    scenario, _ = build_scenario(paper_config())
    return run_scenario(scenario)


@pytest.fixture(scope="session")
def benchmark_halved():
    """Proposed variant at half the integration step."""
    scenario, _ = build_scenario(apply_overrides(paper_config(), ["h=5e-5"]))
    return run_scenario(scenario)


@pytest.fixture(scope="session")
def benchmark_continuous():
    """Proposed variant with the event channel bypassed."""
    scenario, _ = build_scenario(apply_overrides(paper_config(), ["mode=continuous"]))
    return run_scenario(scenario)


@pytest.fixture
def short_config():
    """Benchmark configuration trimmed to a 2-second horizon."""
    return apply_overrides(paper_config(), ["horizon=2"])


def run_short(overrides=()):
    doc = apply_overrides(paper_config(), ["horizon=2", *overrides])
    scenario, ctx = build_scenario(doc)
    return run_scenario(scenario), scenario, ctx


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
