"""Pytest configuration and fixtures."""

import json
import tempfile
from collections.abc import Callable, Generator
from pathlib import Path
from typing import Any

import pytest

from quiver_semi_invariants.algebra.quiver import Arrow, Quiver


def make_quiver(vertices: list[str], arrows: list[tuple[str, str, str]]) -> Quiver:
    """Quiver from (id, tail, head) triples."""
    return Quiver(
        vertices=tuple(vertices),
        arrows=tuple(Arrow(id=a, tail=t, head=h) for a, t, h in arrows),
    )


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for input and output files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def write_json(temp_dir: Path) -> Callable[[str, Any], Path]:
    """Write a JSON document into the temporary directory and return its path."""

    def _write(name: str, data: Any) -> Path:
        path = temp_dir / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def kronecker() -> Quiver:
    """Two vertices, two parallel arrows 1 -> 2."""
    return make_quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


@pytest.fixture
def a2() -> Quiver:
    """Single arrow 1 -> 2."""
    return make_quiver(["1", "2"], [("a", "1", "2")])


@pytest.fixture
def a3() -> Quiver:
    """Linear orientation 1 -> 2 -> 3."""
    return make_quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


@pytest.fixture
def d4_subspace() -> Quiver:
    """D~4 with two arrows into the central vertex 5 and two out of it."""
    return make_quiver(
        ["1", "2", "3", "4", "5"],
        [("a1", "1", "5"), ("a2", "2", "5"), ("a3", "5", "3"), ("a4", "5", "4")],
    )


@pytest.fixture
def jordan() -> Quiver:
    """One vertex with one loop."""
    return make_quiver(["1"], [("x", "1", "1")])


@pytest.fixture
def kronecker_document() -> dict:
    """Kronecker quiver in the quiver file format."""
    return {
        "vertices": ["1", "2"],
        "arrows": [
            {"id": "a", "tail": "1", "head": "2"},
            {"id": "b", "tail": "1", "head": "2"},
        ],
        "relations": [],
    }


@pytest.fixture
def ex2_system_document() -> dict:
    """Generator system of the hypersurface x1x2 + x3x4 + x5x6 without an ambient quiver."""
    weights = {
        "x1": {"1": 1, "2": -1},
        "x2": {"2": 1, "5": -1},
        "x3": {"1": 1, "3": -1},
        "x4": {"3": 1, "5": -1},
        "x5": {"1": 1, "4": -1},
        "x6": {"4": 1, "5": -1},
    }
    return {
        "generators": [{"name": n, "weight": w, "realization": n} for n, w in weights.items()],
        "relations": ["x1*x2 + x3*x4 + x5*x6"],
    }
