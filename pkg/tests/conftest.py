"""
Shared test fixtures.

Adds the repository root to ``sys.path`` so that ``import enorm`` works without an
installed package, and pins the thread pools to a fixed size so that runs are
comparable across machines.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT_DIR = str(Path(__file__).resolve().parent.parent)
if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)

from enorm.services.solver import OperatorPair  # noqa: E402
from tests.helpers import make_pair  # noqa: E402


@pytest.fixture(autouse=True)
def _threads(monkeypatch):
    monkeypatch.setenv("ENORM_THREADS", "2")


@pytest.fixture
def diagonal_pair() -> OperatorPair:
    """A = diag(0, 2), G = diag(0, 1): ‖A‖_E² = 4·min(E, 1)."""
    return OperatorPair(np.diag([0.0, 2.0]), np.diag([0.0, 1.0]))


@pytest.fixture
def random_pair() -> OperatorPair:
    return make_pair(5, seed=1234)
