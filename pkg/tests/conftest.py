import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exoflr.spectra import Dataset  # noqa: E402

DATA_DIR = Path(__file__).parent / "data"


def random_toy(rng, n=5, p=8, instrument_noise=0.5):
    """Small generic dataset; W is X plus independent noise so W != X."""
    X = rng.normal(size=(n, p + 1))
    W = X + instrument_noise * rng.normal(size=(n, p + 1))
    Y = rng.normal(size=n)
    return Dataset(X, W, Y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def toy(rng):
    return random_toy(rng)


@pytest.fixture
def data_dir():
    return DATA_DIR


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
