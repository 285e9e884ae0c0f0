"""Pytest fixtures shared by the test suite."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from thurston_torus.farey import INFINITY
from thurston_torus.search import SearchBudget
from thurston_torus.torus_model import FnCoords, TorusPoint, from_fn

# --------------------------------------------------------------------------- #
# Fixtures                                                                    #
# --------------------------------------------------------------------------- #


@pytest.fixture(scope="session")
def symmetric_point() -> TorusPoint:
    """The hexagonal torus (3, 3, 3)."""
    return TorusPoint.symmetric()


@pytest.fixture(scope="session")
def thick_point() -> TorusPoint:
    """A generic point with every curve longer than 1."""
    return from_fn(FnCoords(INFINITY, 2.0, 0.3))


@pytest.fixture()
def rng() -> np.random.Generator:
    """A seeded random generator, fresh for every test."""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def budget() -> SearchBudget:
    """The default search budget."""
    return SearchBudget()


@pytest.fixture()
def point_file(tmp_path: Path) -> Callable[..., Path]:
    """Factory writing a point to a JSON file and returning its path."""

    def write(point: TorusPoint | dict[str, float], name: str = "point.json") -> Path:
        data = point.to_dict() if isinstance(point, TorusPoint) else point
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
