"""
Reading quiver, generator-system and point files; writing JSON atomically.
"""

import json
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator

from quiver_semi_invariants.algebra.linalg import MIN_SAMPLING_PRIME, parse_field
from quiver_semi_invariants.algebra.quiver import (
    Arrow,
    Quiver,
    RelationSet,
    UniformElement,
    dimension_vector,
    ensure_valid,
)
from quiver_semi_invariants.algebra.representations import RepPoint
from quiver_semi_invariants.algebra.semi_invariants import Generator, GeneratorSystem
from quiver_semi_invariants.errors import FileFormatError

logger = logging.getLogger(__name__)

QUIVER_FILE = "quiver.json"
SYSTEM_FILE = "system.json"


class QuiverFile(BaseModel):
    vertices: list[str] = Field(description="Vertex identifiers in index order")
    arrows: list[Arrow] = Field(default_factory=list)
    relations: list[UniformElement] = Field(default_factory=list)

    @field_validator("vertices", mode="before")
    @classmethod
    def _stringify_vertices(cls, v: Any) -> Any:
        return [str(x) for x in v] if isinstance(v, (list, tuple)) else v


class AmbientSection(BaseModel):
    quiver: QuiverFile
    dim: list[int] | dict[str, int]


class SystemFile(BaseModel):
    vertices: list[str] | None = None
    generators: list[Generator]
    relations: list[str] = Field(default_factory=list)
    ambient: AmbientSection | None = None

    @field_validator("vertices", mode="before")
    @classmethod
    def _stringify_vertices(cls, v: Any) -> Any:
        return [str(x) for x in v] if isinstance(v, (list, tuple)) else v


class PointFile(BaseModel):
    dim: list[int] | dict[str, int]
    field: str = "rational"
    mats: dict[str, list[list[str | int]]] = Field(default_factory=dict)


def _read_json(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise FileFormatError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{path} is not valid JSON: {e}") from e


def _parse(model: type[BaseModel], path: Path) -> Any:
    data = _read_json(path)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise FileFormatError(f"{path} does not follow the expected format: {e}") from e


def _quiver_from(doc: QuiverFile) -> tuple[Quiver, RelationSet]:
    q = Quiver(vertices=tuple(doc.vertices), arrows=tuple(doc.arrows))
    r = RelationSet(elements=tuple(doc.relations))
    ensure_valid(q, r)
    return q, r


def load_quiver(path: Path) -> tuple[Quiver, RelationSet]:
    """Load and validate a quiver file."""
    q, r = _quiver_from(_parse(QuiverFile, path))
    logger.info(f"Loaded quiver with {len(q.vertices)} vertices, {len(q.arrows)} arrows, {len(r.elements)} relations from {path}")
    return q, r


def _natural_key(vertex: str) -> tuple[Any, ...]:
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", vertex))


def load_system(path: Path) -> GeneratorSystem:
    """
    Load a generator-system file. Vertex order is the explicit `vertices`
    list, else the ambient quiver's, else the weight keys in natural order.
    """
    doc: SystemFile = _parse(SystemFile, path)
    ambient = None
    if doc.ambient is not None:
        q, _ = _quiver_from(doc.ambient.quiver)
        ambient = (q, dimension_vector(q, doc.ambient.dim))
    if doc.vertices is not None:
        vertices = doc.vertices
    elif ambient is not None:
        vertices = list(ambient[0].vertices)
    else:
        vertices = sorted({x for g in doc.generators for x in g.weight}, key=_natural_key)
    unknown = sorted({x for g in doc.generators for x in g.weight} - set(vertices))
    if unknown:
        raise FileFormatError(f"{path}: generator weights use unknown vertices {unknown}")
    system = GeneratorSystem(vertices, doc.generators, doc.relations, ambient)
    problems = system.check_realizations()
    if problems:
        raise FileFormatError(f"{path}: " + "; ".join(problems))
    logger.info(f"Loaded {len(system)} generators and {len(system.relations)} relations from {path}")
    return system


def load_point(path: Path, q: Quiver, min_prime: int = MIN_SAMPLING_PRIME) -> RepPoint:
    """Load a point of rep_beta(Q); entries are exact strings or integers."""
    doc: PointFile = _parse(PointFile, path)
    fld = parse_field(doc.field, min_prime)
    return RepPoint.build(q, dimension_vector(q, doc.dim), doc.mats, fld)


def quiver_document(q: Quiver, r: RelationSet) -> dict[str, Any]:
    return {
        "vertices": list(q.vertices),
        "arrows": [a.model_dump() for a in q.arrows],
        "relations": [u.model_dump() for u in r.elements],
    }


def write_json_atomic(path: Path, data: Any) -> None:
    """Write JSON to a temporary file next to `path`, then replace `path`."""
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_fd, temp_path = tempfile.mkstemp(dir=path.parent, prefix=f"{path.stem}_", suffix=".tmp")
    try:
        with os.fdopen(temp_fd, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        os.replace(temp_path, path)
    except Exception:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        logger.error(f"Failed to write {path}")
        raise


def export_fixture(q: Quiver, r: RelationSet, system: GeneratorSystem | None, out_dir: Path) -> list[Path]:
    """Write quiver.json, and system.json when there is a generator system."""
    written = [out_dir / QUIVER_FILE]
    write_json_atomic(written[0], quiver_document(q, r))
    if system is not None:
        doc = system.to_document()
        if system.ambient is not None:
            aq, dim = system.ambient
            doc["ambient"] = {"quiver": quiver_document(aq, RelationSet()), "dim": dim.to_list()}
        written.append(out_dir / SYSTEM_FILE)
        write_json_atomic(written[1], doc)
    for p in written:
        logger.info(f"Wrote {p}")
    return written
