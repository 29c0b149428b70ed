"""Test configuration and fixtures"""

from pathlib import Path
from typing import Callable, Iterator

import numpy as np
import orjson
import pytest

from stellar.config import get_settings
from stellar.models.domain import MultiQubitState
from stellar.services.dfs import example_logical_state
from stellar.utils.normalization import complex_pairs


@pytest.fixture(autouse=True)
def fresh_settings() -> Iterator[None]:
    """Drop settings overridden by a previous CLI invocation"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized checks"""
    return np.random.default_rng(20240607)


@pytest.fixture
def logical_state() -> MultiQubitState:
    """Three-qubit state with xi = (0, 1/sqrt2, 1/sqrt2)"""
    return example_logical_state()


@pytest.fixture
def write_state(tmp_path: Path) -> Callable[..., str]:
    """Write a StateFile document and return its path"""

    def _write(name: str, amps, kind: str = "qubits", **fields) -> str:
        document = {"v": 1, "kind": kind, **fields, "amps": complex_pairs(np.asarray(amps))}
        path = tmp_path / name
        path.write_bytes(orjson.dumps(document))
        return str(path)

    return _write
