import numpy as np
import pytest

from gmmnys.data import Dataset, SparseVector

_LOG_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one ``PASS/FAIL`` line per acceptance criterion."""
    return request.config.stash[_LOG_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


def random_vectors(rng, n, dim, density=0.7, signed=True):
    X = rng.normal(size=(n, dim)) if signed else rng.exponential(size=(n, dim))
    X *= rng.random((n, dim)) < density
    return Dataset.from_matrix(X, np.zeros(n, dtype=int)).vectors


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sv():
    return SparseVector.from_dense
