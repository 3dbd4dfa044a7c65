"""
Quivers with relations, paths, dimension vectors, weights and the Euler form.

Paths keep their arrows in traversal order: ["x1", "x2"] goes ta(x1) -> ha(x1)
= ta(x2) -> ha(x2), and acts on a representation as V(x2)V(x1). Weights use
the convention e_tp - e_hp: +1 at the tail, -1 at the head.
"""

import logging
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from quiver_semi_invariants.errors import (
    BrokenPath,
    DanglingArrow,
    IndexMismatch,
    InvalidPath,
    NonUniformRelation,
    ValidationFailed,
    ZeroVector,
)

logger = logging.getLogger(__name__)


class Arrow(BaseModel):
    """An arrow `id`: tail -> head."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(description="Arrow identifier, unique within the quiver")
    tail: str = Field(description="Vertex the arrow starts at")
    head: str = Field(description="Vertex the arrow ends at")


class Quiver(BaseModel):
    """A finite directed graph; loops and multiple arrows are allowed."""

    model_config = ConfigDict(frozen=True)

    vertices: tuple[str, ...] = Field(description="Vertex identifiers in index order")
    arrows: tuple[Arrow, ...] = Field(default=(), description="Arrows of the quiver")

    @field_validator("vertices", mode="before")
    @classmethod
    def _stringify_vertices(cls, v: Any) -> Any:
        return tuple(str(x) for x in v) if isinstance(v, (list, tuple)) else v

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise BrokenPath(f"unknown arrow {arrow_id!r}")

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise IndexMismatch(f"unknown vertex {vertex!r}") from None

    def is_acyclic(self) -> bool:
        """True iff there is no oriented cycle (loops count as cycles)."""
        indegree = Counter({v: 0 for v in self.vertices})
        for a in self.arrows:
            indegree[a.head] += 1
        ready = [v for v in self.vertices if indegree[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for a in self.arrows:
                if a.tail == v:
                    indegree[a.head] -= 1
                    if indegree[a.head] == 0:
                        ready.append(a.head)
        return seen == len(self.vertices)


class Path(BaseModel):
    """Arrows in traversal order; a trivial path e_x has no arrows and anchor x."""

    model_config = ConfigDict(frozen=True)

    arrows: tuple[str, ...] = ()
    anchor: str | None = None

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(arrows=(), anchor=vertex)

    @classmethod
    def of(cls, *arrow_ids: str) -> "Path":
        return cls(arrows=tuple(arrow_ids))

    def __len__(self) -> int:
        return len(self.arrows)

    def is_trivial(self) -> bool:
        return not self.arrows

    def check(self, q: Quiver) -> None:
        """Raise BrokenPath unless every arrow exists and consecutive arrows compose."""
        if self.is_trivial():
            if self.anchor is None or self.anchor not in q.vertices:
                raise BrokenPath(f"trivial path needs an existing anchor vertex, got {self.anchor!r}")
            return
        for prev, curr in zip(self.arrows, self.arrows[1:]):
            if q.arrow(prev).head != q.arrow(curr).tail:
                raise BrokenPath(f"arrows {prev!r} and {curr!r} do not compose in path {self.label()}")
        q.arrow(self.arrows[-1])

    def tail(self, q: Quiver) -> str:
        return self.anchor if self.is_trivial() else q.arrow(self.arrows[0]).tail  # type: ignore[return-value]

    def head(self, q: Quiver) -> str:
        return self.anchor if self.is_trivial() else q.arrow(self.arrows[-1]).head  # type: ignore[return-value]

    def then(self, other: "Path") -> "Path":
        """This path followed by `other`."""
        if self.is_trivial():
            return other
        if other.is_trivial():
            return self
        return Path(arrows=self.arrows + other.arrows)

    def label(self) -> str:
        return "".join(self.arrows) if self.arrows else f"e_{self.anchor}"


class Term(BaseModel):
    """One term coeff * path of a uniform element."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeff: Fraction = Field(description="Exact rational coefficient, serialized as a string")
    path: Path

    @field_validator("coeff", mode="before")
    @classmethod
    def _parse_coeff(cls, v: Any) -> Fraction:
        if isinstance(v, Fraction):
            return v
        if isinstance(v, float):
            raise ValueError("coefficients must be exact: use a string such as '3/2'")
        try:
            return Fraction(str(v))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"invalid coefficient {v!r}") from e

    @field_validator("path", mode="before")
    @classmethod
    def _parse_path(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return {"arrows": tuple(v)}
        return v

    @field_serializer("coeff")
    def _dump_coeff(self, coeff: Fraction) -> str:
        return str(coeff)

    @field_serializer("path")
    def _dump_path(self, path: Path) -> list[str]:
        return list(path.arrows)


class UniformElement(BaseModel):
    """A linear combination of parallel paths."""

    model_config = ConfigDict(frozen=True)

    terms: tuple[Term, ...]

    def tail(self, q: Quiver) -> str:
        return self.terms[0].path.tail(q)

    def head(self, q: Quiver) -> str:
        return self.terms[0].path.head(q)

    def label(self) -> str:
        parts = []
        for t in self.terms:
            c = "" if t.coeff == 1 else ("-" if t.coeff == -1 else f"{t.coeff}*")
            parts.append(f"{c}{t.path.label()}")
        return " + ".join(parts).replace("+ -", "- ")


class RelationSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    elements: tuple[UniformElement, ...] = ()


class ValidationIssue(BaseModel):
    kind: str = Field(description="DanglingArrow, NonUniformRelation, BrokenPath, DuplicateId, ...")
    element: str = Field(description="The offending vertex, arrow or relation")
    message: str


class ValidationReport(BaseModel):
    issues: list[ValidationIssue] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


_ISSUE_ERRORS: dict[str, type[ValidationFailed]] = {
    "DanglingArrow": DanglingArrow,
    "NonUniformRelation": NonUniformRelation,
    "BrokenPath": BrokenPath,
}


def validate_quiver(q: Quiver, r: RelationSet | None = None) -> ValidationReport:
    """Check every structural invariant of (q, r) and collect all violations."""
    report = ValidationReport()

    def issue(kind: str, element: str, message: str) -> None:
        report.issues.append(ValidationIssue(kind=kind, element=element, message=message))

    for vertex, count in Counter(q.vertices).items():
        if count > 1:
            issue("DuplicateId", vertex, f"vertex {vertex!r} is listed {count} times")
    for arrow_id, count in Counter(a.id for a in q.arrows).items():
        if count > 1:
            issue("DuplicateId", arrow_id, f"arrow {arrow_id!r} is listed {count} times")
    vertices = set(q.vertices)
    for a in q.arrows:
        for end, vertex in (("tail", a.tail), ("head", a.head)):
            if vertex not in vertices:
                issue("DanglingArrow", a.id, f"arrow {a.id!r} has {end} {vertex!r}, which is not a vertex")

    for k, u in enumerate((r or RelationSet()).elements):
        name = f"relation {k + 1} ({u.label()})" if u.terms else f"relation {k + 1}"
        if not u.terms:
            issue("EmptyRelation", name, f"{name} has no terms")
            continue
        ends = set()
        for t in u.terms:
            if t.coeff == 0:
                issue("ZeroCoefficient", name, f"{name} has a zero coefficient on {t.path.label()}")
            if len(t.path) < 2:
                issue("NonAdmissible", name, f"{name} uses path {t.path.label()} of length < 2")
            try:
                t.path.check(q)
            except BrokenPath as e:
                issue("BrokenPath", name, f"{name}: {e}")
                continue
            ends.add((t.path.tail(q), t.path.head(q)))
        if len(ends) > 1:
            shown = ", ".join(f"{s}->{e}" for s, e in sorted(ends))
            issue("NonUniformRelation", name, f"{name} mixes paths {shown}")
    return report


def ensure_valid(q: Quiver, r: RelationSet | None = None) -> None:
    """Raise the error class of the first issue, carrying the whole report."""
    report = validate_quiver(q, r)
    if report.ok:
        return
    first = report.issues[0]
    cls = _ISSUE_ERRORS.get(first.kind, ValidationFailed)
    summary = "; ".join(f"{i.kind}: {i.message}" for i in report.issues)
    raise cls(f"invalid quiver: {summary}", report)


@dataclass(frozen=True, eq=False)
class Weight:
    """An integer vector indexed by the vertices of a quiver."""

    vertices: tuple[str, ...]
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.entries):
            raise IndexMismatch(
                f"{len(self.entries)} entries for {len(self.vertices)} vertices"
            )

    @classmethod
    def zero(cls, vertices: Sequence[str]) -> "Weight":
        return cls(tuple(vertices), (0,) * len(vertices))

    @classmethod
    def unit(cls, vertices: Sequence[str], vertex: str) -> "Weight":
        vs = tuple(vertices)
        if vertex not in vs:
            raise IndexMismatch(f"unknown vertex {vertex!r}")
        return cls(vs, tuple(1 if v == vertex else 0 for v in vs))

    @classmethod
    def from_mapping(cls, vertices: Sequence[str], values: Mapping[str, int]) -> "Weight":
        vs = tuple(vertices)
        unknown = set(values) - set(vs)
        if unknown:
            raise IndexMismatch(f"unknown vertices {sorted(unknown)}")
        return cls(vs, tuple(int(values.get(v, 0)) for v in vs))

    def __getitem__(self, vertex: str) -> int:
        return self.entries[self.vertices.index(vertex)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Weight):
            return NotImplemented
        return self.vertices == other.vertices and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.vertices, self.entries))

    def _check(self, other: "Weight") -> None:
        if self.vertices != other.vertices:
            raise IndexMismatch(f"vectors indexed by {self.vertices} and {other.vertices}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        out = tuple(a + b for a, b in zip(self.entries, other.entries))
        cls = type(self) if type(self) is type(other) else Weight
        return cls(self.vertices, out)

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(self.vertices, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Weight":
        return Weight(self.vertices, tuple(-a for a in self.entries))

    def __mul__(self, k: int) -> "Weight":
        return Weight(self.vertices, tuple(k * a for a in self.entries))

    __rmul__ = __mul__

    def dot(self, other: "Weight") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.entries, other.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_dict(self) -> dict[str, int]:
        return dict(zip(self.vertices, self.entries))

    def to_list(self) -> list[int]:
        return list(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.entries) + ")"


@dataclass(frozen=True, eq=False)
class DimensionVector(Weight):
    """A nonnegative Weight: the dimension of each vertex space."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if any(a < 0 for a in self.entries):
            raise IndexMismatch(f"dimension vector has negative entries: {self.entries}")

    def __mul__(self, k: int) -> "Weight":
        if k >= 0:
            return DimensionVector(self.vertices, tuple(k * a for a in self.entries))
        return super().__mul__(k)

    __rmul__ = __mul__

    def divide(self, d: int) -> "DimensionVector | None":
        """This vector divided by d, or None when some entry is not divisible."""
        if d <= 0 or any(a % d for a in self.entries):
            return None
        return DimensionVector(self.vertices, tuple(a // d for a in self.entries))

    def gl_dimension(self) -> int:
        """dim GL_beta = sum of squares."""
        return sum(a * a for a in self.entries)


def _vector_values(q: Quiver, values: Sequence[int] | Mapping[str, int] | str) -> tuple[int, ...]:
    if isinstance(values, str):
        try:
            values = [int(x) for x in values.replace(" ", "").split(",") if x != ""]
        except ValueError as e:
            raise IndexMismatch(f"cannot parse vector {values!r}: {e}") from e
    if isinstance(values, Mapping):
        return Weight.from_mapping(q.vertices, values).entries
    if len(values) != len(q.vertices):
        raise IndexMismatch(
            f"vector has {len(values)} entries but the quiver has {len(q.vertices)} vertices"
        )
    return tuple(int(x) for x in values)


def dimension_vector(q: Quiver, values: Sequence[int] | Mapping[str, int] | str) -> DimensionVector:
    """Build a dimension vector from a list, a vertex mapping or a CSV string."""
    return DimensionVector(q.vertices, _vector_values(q, values))


def weight(q: Quiver, values: Sequence[int] | Mapping[str, int] | str) -> Weight:
    return Weight(q.vertices, _vector_values(q, values))


def require_nonzero(b: Weight) -> None:
    if b.is_zero():
        raise ZeroVector("dimension vector must be nonzero")


def euler_form(q: Quiver, a: Weight, b: Weight) -> int:
    """<a,b> = sum_x a(x)b(x) - sum_arrows a(ta)b(ha)."""
    for vec in (a, b):
        if vec.vertices != q.vertices:
            raise IndexMismatch(f"vector indexed by {vec.vertices}, quiver has {q.vertices}")
    value = a.dot(b)
    for arrow in q.arrows:
        value -= a[arrow.tail] * b[arrow.head]
    return value


def generator_weight(q: Quiver, p: Path) -> Weight:
    """Weight e_tp - e_hp of the coordinate function of path p (all-ones dimension vector)."""
    try:
        p.check(q)
    except BrokenPath as e:
        raise InvalidPath(str(e)) from e
    if p.is_trivial():
        return Weight.zero(q.vertices)
    return Weight.unit(q.vertices, p.tail(q)) - Weight.unit(q.vertices, p.head(q))
