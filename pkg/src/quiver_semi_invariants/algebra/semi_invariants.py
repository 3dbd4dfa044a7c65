"""
Semi-invariant rings presented by generators and relations.

A GeneratorSystem lists weighted generators f_i (optionally realized as
polynomials in the coordinates of rep_beta(Q)) and weight-homogeneous
relations among them. The functions below enumerate monomials by weight,
locate the minimal weight chi carrying two monomials, compute weight-space
dimensions modulo the relations, and evaluate pencils h_alpha = alpha*p - q.
"""

import logging
import random
import re
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Any

from pydantic import BaseModel, Field
from sympy import Expr, Mul, Poly, Rational, Symbol

from quiver_semi_invariants.algebra.lattice import nonneg_lattice_solutions
from quiver_semi_invariants.algebra.linalg import RATIONALS, Matrix, Scalar, rank
from quiver_semi_invariants.algebra.polynomials import (
    evaluate,
    parse_polynomial,
    symbols_for,
    to_poly,
)
from quiver_semi_invariants.algebra.quiver import (
    DimensionVector,
    Path,
    Quiver,
    Weight,
    generator_weight,
)
from quiver_semi_invariants.algebra.representations import (
    RepPoint,
    act,
    coordinate_name,
    coordinate_names,
    random_group_element,
)
from quiver_semi_invariants.errors import (
    BadParams,
    FileFormatError,
    NoMonomial,
    NonUniformRelation,
    NotFoundInBox,
    PZero,
)
from quiver_semi_invariants.settings import get_settings

logger = logging.getLogger(__name__)

_si = get_settings().si_ring
DEFAULT_BOX = _si.box
JACOBIAN_POINTS = _si.jacobian_points
JACOBIAN_COORDINATE_MAX = _si.jacobian_coordinate_max
ORBIT_CHECKS = _si.orbit_checks


class Generator(BaseModel):
    """A semi-invariant generator with its weight and optional coordinate realization."""

    name: str = Field(description="Generator name used in relation strings")
    weight: dict[str, int] = Field(description="Weight as a vertex -> integer mapping")
    realization: str | None = Field(
        default=None, description="Polynomial in the ambient coordinates, if known"
    )


@dataclass(frozen=True)
class WeightedMonomial:
    """A monomial prod f_i^e_i in the generators."""

    exponents: tuple[int, ...]

    @classmethod
    def unit(cls, size: int) -> "WeightedMonomial":
        return cls((0,) * size)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.exponents) if e)

    def is_coprime(self, other: "WeightedMonomial") -> bool:
        return not (self.support & other.support)

    def divides(self, other: "WeightedMonomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "WeightedMonomial") -> "WeightedMonomial":
        return WeightedMonomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def value(self, values: Sequence[Scalar], one: Scalar) -> Scalar:
        result = one
        for v, e in zip(values, self.exponents):
            for _ in range(e):
                result = result * v
        return result

    def label(self, names: Sequence[str]) -> str:
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, self.exponents) if e]
        return "*".join(factors) if factors else "1"


class GeneratorSystem:
    """
    Generators with weights, relations among them, and an optional ambient
    (quiver, dimension vector) whose coordinates the realizations use.
    """

    def __init__(
        self,
        vertices: Sequence[str],
        generators: Sequence[Generator],
        relations: Sequence[str] = (),
        ambient: tuple[Quiver, DimensionVector] | None = None,
    ) -> None:
        self.vertices = tuple(vertices)
        self.generators = tuple(generators)
        self.relations = tuple(relations)
        self.ambient = ambient

        names = [g.name for g in self.generators]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise FileFormatError(f"duplicate generator names {duplicates}")
        self.names = tuple(names)
        self.symbols = symbols_for(names)
        self.weights = tuple(Weight.from_mapping(self.vertices, g.weight) for g in self.generators)

        self.relation_polys: tuple[Poly, ...] = tuple(
            to_poly(parse_polynomial(r, names, "relation"), self.symbols) for r in self.relations
        )
        for text, poly in zip(self.relations, self.relation_polys):
            if poly.is_zero:
                raise FileFormatError(f"relation {text!r} is zero")
            weights = {self.monomial_weight(WeightedMonomial(m)).entries for m in poly.monoms()}
            if len(weights) > 1:
                raise NonUniformRelation(f"relation {text!r} is not weight-homogeneous")

        self.coordinates: tuple[str, ...] = ()
        if ambient is not None:
            q, dim = ambient
            if dim.vertices != q.vertices:
                raise FileFormatError("ambient dimension vector does not match the ambient quiver")
            self.coordinates = tuple(coordinate_names(q, dim))
        self.coordinate_symbols = symbols_for(self.coordinates)
        self.realizations: tuple[Expr | None, ...] = tuple(
            None
            if g.realization is None
            else parse_polynomial(
                g.realization,
                self.coordinates if ambient is not None else _free_names(g.realization),
                f"realization of {g.name}",
            )
            for g in self.generators
        )

    def __len__(self) -> int:
        return len(self.generators)

    def weight_matrix(self) -> list[list[int]]:
        """One row per vertex, one column per generator."""
        return [[w.entries[i] for w in self.weights] for i in range(len(self.vertices))]

    def monomial_weight(self, m: WeightedMonomial) -> Weight:
        total = Weight.zero(self.vertices)
        for w, e in zip(self.weights, m.exponents):
            if e:
                total = total + w * e
        return total

    def label(self, m: WeightedMonomial) -> str:
        return m.label(self.names)

    def monomial(self, *names: str) -> WeightedMonomial:
        """The monomial with one factor per listed generator name (repeats allowed)."""
        unknown = sorted(set(names) - set(self.names))
        if unknown:
            raise BadParams(f"unknown generators {unknown}")
        return WeightedMonomial(tuple(names.count(n) for n in self.names))

    def monomial_expr(self, m: WeightedMonomial) -> Expr:
        return Mul(*(s**e for s, e in zip(self.symbols, m.exponents)))

    def relation_weight(self, k: int) -> Weight:
        return self.monomial_weight(WeightedMonomial(self.relation_polys[k].monoms()[0]))

    def has_realizations(self) -> bool:
        return self.ambient is not None and all(r is not None for r in self.realizations)

    def generator_values(self, v: RepPoint) -> list[Scalar]:
        """Values f_i(V) in the field of V."""
        if self.ambient is None:
            raise FileFormatError("generator system has no ambient quiver to evaluate on")
        q, dim = self.ambient
        if v.quiver.vertices != q.vertices or v.dim != dim:
            raise FileFormatError("point does not live in the ambient representation space")
        coords = v.coordinates()
        values = {Symbol(name): v.field.to_rational(x) for name, x in coords.items()}
        out = []
        for g, expr in zip(self.generators, self.realizations):
            if expr is None:
                raise FileFormatError(f"generator {g.name!r} has no realization")
            out.append(v.field.convert(evaluate(expr, values)))
        return out

    def check_realizations(self) -> list[str]:
        """
        Torus-weight check of every realization: each coordinate of arrow a
        scales with weight e_ta - e_ha, so each monomial of the realization of
        f_i must have total weight sigma_i(x) * beta(x) at every vertex x.
        """
        if self.ambient is None:
            return []
        q, dim = self.ambient
        coordinate_weight: dict[str, Weight] = {}
        for a in q.arrows:
            w = Weight.unit(q.vertices, a.tail) - Weight.unit(q.vertices, a.head)
            rows, cols = dim[a.head], dim[a.tail]
            for i in range(rows):
                for j in range(cols):
                    coordinate_weight[coordinate_name(a.id, i, j, rows, cols)] = w
        problems = []
        for g, sigma, expr in zip(self.generators, self.weights, self.realizations):
            if expr is None:
                continue
            expected = Weight(q.vertices, tuple(sigma[x] * dim[x] for x in q.vertices))
            poly = to_poly(expr, self.coordinate_symbols)
            for monom in poly.monoms():
                total = Weight.zero(q.vertices)
                for name, e in zip(self.coordinates, monom):
                    if e:
                        total = total + coordinate_weight[name] * e
                if total != expected:
                    problems.append(
                        f"realization of {g.name} has a term of weight {total}, declared {expected}"
                    )
                    break
        return problems

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "vertices": list(self.vertices),
            "generators": [g.model_dump(exclude_none=True) for g in self.generators],
            "relations": list(self.relations),
        }
        if self.ambient is not None:
            q, dim = self.ambient
            doc["ambient"] = {"quiver": q.model_dump(), "dim": dim.to_list()}
        return doc


def _free_names(text: str) -> list[str]:
    """Identifier-like names in a polynomial string, for realizations without an ambient."""
    return sorted(set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text)))


def arrow_coordinate_system(
    q: Quiver, relations: Sequence[str], vertices: Sequence[str] | None = None
) -> GeneratorSystem:
    """Generators = arrow coordinates of rep_(1,...,1)(Q), weighted by generator_weight."""
    dim = DimensionVector(q.vertices, (1,) * len(q.vertices))
    generators = [
        Generator(name=a.id, weight=generator_weight(q, Path.of(a.id)).to_dict(), realization=a.id)
        for a in q.arrows
    ]
    return GeneratorSystem(vertices or q.vertices, generators, relations, (q, dim))


def monomials_of_weight(sys: GeneratorSystem, sigma: Weight, bound: int) -> list[WeightedMonomial]:
    """All monomials of weight sigma with every exponent <= bound."""
    solutions = nonneg_lattice_solutions(sys.weight_matrix(), sigma.entries, bound)
    return [WeightedMonomial(s) for s in solutions]


@dataclass(frozen=True)
class WeightCell:
    weight: Weight
    min_degree: int
    monomials: list[WeightedMonomial]


def weight_table(sys: GeneratorSystem, box: int) -> list[WeightCell]:
    """
    Nonzero weights of monomials of total degree 1..box, each with its
    monomials, ordered by minimal degree and then lexicographically.
    """
    cells: dict[tuple[int, ...], WeightCell] = {}
    n = len(sys)
    for degree in range(1, box + 1):
        for combo in combinations_with_replacement(range(n), degree):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            m = WeightedMonomial(tuple(exps))
            w = sys.monomial_weight(m)
            if w.is_zero():
                continue
            if w.entries not in cells:
                cells[w.entries] = WeightCell(w, degree, [])
            cells[w.entries].monomials.append(m)
    return sorted(cells.values(), key=lambda c: (c.min_degree, c.weight.entries))


@dataclass(frozen=True)
class MinimalWeightReport:
    chi: Weight
    monomials: list[WeightedMonomial]
    count: int
    codim: int
    unique_in_box: bool
    box: int

    def to_dict(self, sys: GeneratorSystem) -> dict[str, Any]:
        return {
            "chi": self.chi.to_list(),
            "monomials": [sys.label(m) for m in self.monomials],
            "count": self.count,
            "codim": self.codim,
            "unique_in_box": self.unique_in_box,
            "box": self.box,
        }


def minimal_double_weight(sys: GeneratorSystem, box: int = DEFAULT_BOX) -> MinimalWeightReport:
    """The first nonzero weight, in degree-graded scan order, carrying at least two monomials."""
    if box < 1:
        raise BadParams("box must be at least 1")
    cells = weight_table(sys, box)
    doubles = [c for c in cells if len(c.monomials) >= 2]
    if not doubles:
        raise NotFoundInBox(f"no weight carries two monomials of degree <= {box}")
    chi = doubles[0].weight
    monomials = monomials_of_weight(sys, chi, box)
    unique = True
    for cell in doubles[1:]:
        if not any(p.divides(m) for m in cell.monomials for p in monomials):
            logger.info(f"weight {cell.weight} has {len(cell.monomials)} monomials none divisible by a chi-monomial")
            unique = False
            break
    return MinimalWeightReport(chi, monomials, len(monomials), len(monomials) - 2, unique, box)


def _realized_rank(sys: GeneratorSystem, monomials: list[WeightedMonomial]) -> int:
    """Rank of the realized monomials as polynomials in the ambient coordinates."""
    substitution = dict(zip(sys.symbols, sys.realizations))
    polys = [
        to_poly(sys.monomial_expr(m).xreplace(substitution), sys.coordinate_symbols)
        for m in monomials
    ]
    columns = sorted({mon for p in polys for mon in p.monoms()}, reverse=True)
    index = {mon: k for k, mon in enumerate(columns)}
    rows = []
    for p in polys:
        row = [0] * len(columns)
        for mon, c in p.terms():
            row[index[mon]] = c
        rows.append(row)
    return rank(Matrix.from_rows(RATIONALS, rows, len(columns)))


def weight_space_dim_symbolic(sys: GeneratorSystem, sigma: Weight, bound: int = DEFAULT_BOX) -> int:
    """
    dim of the span of weight-sigma monomials modulo the relation ideal.

    The degree-sigma piece of the ideal is spanned by m*H for relations H and
    monomials m of weight sigma - weight(H). Without relations the realized
    monomials are used instead, when available.
    """
    monomials = monomials_of_weight(sys, sigma, bound)
    if not sys.relations:
        if sys.has_realizations() and monomials:
            return _realized_rank(sys, monomials)
        return len(monomials)

    products: list[Poly] = []
    for k, h in enumerate(sys.relation_polys):
        for m in monomials_of_weight(sys, sigma - sys.relation_weight(k), bound):
            products.append(h * Poly(sys.monomial_expr(m), *sys.symbols, domain=h.domain))

    columns = [m.exponents for m in monomials]
    seen = set(columns)
    for p in products:
        for mon in p.monoms():
            if mon not in seen:
                seen.add(mon)
                columns.append(mon)
    if not products:
        return len(columns)
    index = {mon: k for k, mon in enumerate(columns)}
    rows = []
    for p in products:
        row: list[Any] = [0] * len(columns)
        for mon, c in p.terms():
            row[index[mon]] = c
        rows.append(row)
    return len(columns) - rank(Matrix.from_rows(RATIONALS, rows, len(columns)))


@dataclass(frozen=True)
class RemainderResult:
    n: int
    rem: Weight
    rem_monomials: int
    predicted_dim: int | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "rem": self.rem.to_list(),
            "rem_monomials": self.rem_monomials,
            "predicted_dim": self.predicted_dim,
        }


def weight_remainder(
    sigma: Weight, report: MinimalWeightReport, sys: GeneratorSystem, bound: int = DEFAULT_BOX
) -> RemainderResult:
    """Largest n with sigma - n*chi realized, the remainder, and the predicted dim n + 1."""
    if not monomials_of_weight(sys, sigma, bound):
        raise NoMonomial(f"weight {sigma} is not realized by a monomial with exponents <= {bound}")
    n = 0
    while monomials_of_weight(sys, sigma - report.chi * (n + 1), bound):
        n += 1
    rem = sigma - report.chi * n
    count = len(monomials_of_weight(sys, rem, bound))
    predicted = n + 1 if count == 1 else None
    if predicted is None:
        logger.info(f"remainder {rem} of {sigma} carries {count} monomials; no prediction")
    return RemainderResult(n, rem, count, predicted)


def _random_values(rng: random.Random, size: int, coordinate_max: int) -> list[Rational]:
    return [Rational(rng.randint(1, coordinate_max)) for _ in range(size)]


def jacobian_rank_at(sys: GeneratorSystem, values: Sequence[Any]) -> int:
    """Rank of (dH_i/df_j) at the given generator values."""
    if not sys.relation_polys:
        return 0
    rows = [
        [h.diff(s)(*values) for s in sys.symbols] for h in sys.relation_polys
    ]
    return rank(Matrix.from_rows(RATIONALS, rows, len(sys.symbols)))


def jacobian_rank(
    sys: GeneratorSystem,
    seed: int = 0,
    points: int = JACOBIAN_POINTS,
    coordinate_max: int = JACOBIAN_COORDINATE_MAX,
) -> int:
    """Max Jacobian rank over random points with coordinates in 1..coordinate_max."""
    rng = random.Random(seed)
    best = 0
    for _ in range(points):
        best = max(best, jacobian_rank_at(sys, _random_values(rng, len(sys), coordinate_max)))
    return best


@dataclass(frozen=True)
class PencilElement:
    """h_alpha = alpha * p - q for two monomials of equal weight."""

    alpha: Rational
    p: WeightedMonomial
    q: WeightedMonomial

    def evaluate(self, sys: GeneratorSystem, v: RepPoint) -> Scalar:
        values = sys.generator_values(v)
        one = v.field.one
        return v.field.convert(self.alpha) * self.p.value(values, one) - self.q.value(values, one)

    def label(self, sys: GeneratorSystem) -> str:
        return f"{self.alpha}*{sys.label(self.p)} - {sys.label(self.q)}"


@dataclass(frozen=True)
class PhiResult:
    alpha: Rational
    p_value: Rational
    q_value: Rational
    vanishes_at_point: bool
    orbit_checks: int
    orbit_checks_passed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": str(self.alpha),
            "p_value": str(self.p_value),
            "q_value": str(self.q_value),
            "vanishes_at_point": self.vanishes_at_point,
            "orbit_checks": self.orbit_checks,
            "orbit_checks_passed": self.orbit_checks_passed,
        }


def phi_value(
    p: WeightedMonomial,
    q: WeightedMonomial,
    sys: GeneratorSystem,
    v: RepPoint,
    seed: int = 0,
    orbit_checks: int = ORBIT_CHECKS,
) -> PhiResult:
    """alpha = q(V)/p(V), with h_alpha checked to vanish at V and at random points g.V."""
    if sys.monomial_weight(p) != sys.monomial_weight(q):
        raise BadParams(f"{sys.label(p)} and {sys.label(q)} have different weights")
    fld = v.field
    values = sys.generator_values(v)
    pv, qv = p.value(values, fld.one), q.value(values, fld.one)
    if not pv:
        raise PZero(f"{sys.label(p)} vanishes at the given point")
    alpha = fld.to_rational(qv / pv)
    pencil = PencilElement(alpha, p, q)
    vanishes = not pencil.evaluate(sys, v)

    rng = random.Random(seed)
    passed = 0
    for _ in range(orbit_checks):
        g = random_group_element(v.dim, rng, fld)
        if not pencil.evaluate(sys, act(g, v)):
            passed += 1
    return PhiResult(alpha, fld.to_rational(pv), fld.to_rational(qv), vanishes, orbit_checks, passed)


@dataclass(frozen=True)
class MultiplicityReport:
    multiplicity_free: bool
    witness: Weight | None
    witness_dim: int | None
    box: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "multiplicity_free": self.multiplicity_free,
            "witness": self.witness.to_list() if self.witness else None,
            "witness_dim": self.witness_dim,
            "box": self.box,
        }


def multiplicity_free_in_box(sys: GeneratorSystem, box: int = DEFAULT_BOX) -> MultiplicityReport:
    """False, with the first witness in scan order, iff some weight space has dim >= 2."""
    for cell in weight_table(sys, box):
        if len(cell.monomials) < 2:
            continue
        d = weight_space_dim_symbolic(sys, cell.weight, box)
        if d >= 2:
            return MultiplicityReport(False, cell.weight, d, box)
    return MultiplicityReport(True, None, None, box)


@dataclass(frozen=True)
class MonomialPair:
    p: WeightedMonomial
    q: WeightedMonomial
    coprime: bool


def monomial_pairs(report: MinimalWeightReport) -> list[MonomialPair]:
    """All pairs of chi-monomials, flagged by coprimality."""
    return [MonomialPair(p, q, p.is_coprime(q)) for p, q in combinations(report.monomials, 2)]


@dataclass(frozen=True)
class TrinomialRelation:
    terms: tuple[tuple[Rational, WeightedMonomial], ...]

    @property
    def pairwise_coprime(self) -> bool:
        return all(a.is_coprime(b) for (_, a), (_, b) in combinations(self.terms, 2))

    def label(self, sys: GeneratorSystem) -> str:
        return " + ".join(f"{c}*{sys.label(m)}" for c, m in self.terms)


def trinomial_relations(sys: GeneratorSystem) -> list[TrinomialRelation]:
    """The relations with exactly three terms."""
    out = []
    for h in sys.relation_polys:
        terms = h.terms()
        if len(terms) == 3:
            out.append(
                TrinomialRelation(tuple((Rational(c), WeightedMonomial(m)) for m, c in terms))
            )
    return out


def relation_differences(sys: GeneratorSystem) -> list[Expr]:
    """H_(k+1) - H_1 for k = 1..m-1."""
    if not sys.relation_polys:
        return []
    first = sys.relation_polys[0]
    return [(h - first).as_expr() for h in sys.relation_polys[1:]]


def king_screening(q: Quiver, beta: DimensionVector, radius: int) -> list[Weight]:
    """Weights theta with |theta| <= radius and theta . beta = 0, for a single-vertex quiver."""
    if len(q.vertices) != 1:
        raise BadParams("King screening is implemented for single-vertex quivers only")
    return [
        Weight(q.vertices, (t,)) for t in range(-radius, radius + 1) if t * beta.entries[0] == 0
    ]

