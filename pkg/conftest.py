# ------------------------------------------------------------------------------
# Shared pytest fixtures. Exact tables are built once per session.
# ------------------------------------------------------------------------------
import numpy as np
import pytest

from necklace_lab.exactdist import dist_table, process_counts


@pytest.fixture(scope="session")
def table60():
    return dist_table(60)


@pytest.fixture(scope="session")
def counts20():
    return process_counts(20)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(autouse=True)
def _lab_env(monkeypatch):
    """Keep tests independent of a developer's local .env overrides."""
    for name in ("NECKLACE_THREADS", "NECKLACE_LOG_LEVEL", "NECKLACE_SEED"):
        monkeypatch.delenv(name, raising=False)
