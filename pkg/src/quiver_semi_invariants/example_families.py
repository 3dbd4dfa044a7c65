"""
Built-in fixture families and their end-to-end verification.

- Ex1: one vertex, loops x, y, relations x^2, y^2, xy, yx, dimension (2);
  band modules M_lam with x = [[0,1],[0,0]], y = [[0,lam],[0,0]].
- Ex2: arrows x1:1->2, x2:2->5, x3:1->3, x4:3->5, x5:1->4, x6:4->5 with the
  relation x1x2 + x3x4 + x5x6, all-ones dimension vector.
- Ex2TildeD4: the subspace orientation of D~4 with d = (1,1,1,1,2).
- Ex3(n): arrows x_k:0->k, y_k:k->n+3 (k = 1..n+2) with relations
  x1y1 + k x2y2 + x_(k+2)y_(k+2) for k = 1..n, all-ones dimension vector.
"""

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, computed_field
from sympy import expand, sympify

from quiver_semi_invariants.algebra.quiver import (
    Arrow,
    DimensionVector,
    Path,
    Quiver,
    RelationSet,
    Term,
    UniformElement,
    Weight,
    dimension_vector,
    validate_quiver,
)
from quiver_semi_invariants.algebra.representations import (
    RepPoint,
    ambient_dimension,
    end_dim,
    is_brick,
    is_isomorphic,
    is_point_of,
    orbit_codim_hereditary,
    orbit_dimension,
)
from quiver_semi_invariants.algebra.roots import RootClass, classify_root, prehomogeneity_report
from quiver_semi_invariants.algebra.semi_invariants import (
    GeneratorSystem,
    arrow_coordinate_system,
    jacobian_rank,
    jacobian_rank_at,
    king_screening,
    minimal_double_weight,
    monomial_pairs,
    multiplicity_free_in_box,
    phi_value,
    relation_differences,
    trinomial_relations,
    weight_remainder,
    weight_space_dim_symbolic,
)
from quiver_semi_invariants.errors import BadParams
from quiver_semi_invariants.settings import get_settings

logger = logging.getLogger(__name__)

EXAMPLE_SETTINGS = get_settings().examples

# numerator range and denominator cap for sampled parameters
LAMBDA_NUMERATORS = (-100, 100)
LAMBDA_MAX_DENOMINATOR = 5


class FixtureKind(str, Enum):
    EX1 = "Ex1"
    EX2 = "Ex2"
    EX2_TILDE_D4 = "Ex2TildeD4"
    EX3 = "Ex3"


CLI_NAMES = {
    "ex1": FixtureKind.EX1,
    "ex2": FixtureKind.EX2,
    "ex2-d4": FixtureKind.EX2_TILDE_D4,
    "ex3": FixtureKind.EX3,
}


class FixtureId(BaseModel):
    """Which fixture, with n for Ex3."""

    model_config = ConfigDict(frozen=True)

    kind: FixtureKind
    n: int | None = Field(default=None, description="Family index for Ex3 (n >= 2)")

    def check(self) -> None:
        if self.kind is FixtureKind.EX3:
            if self.n is None or self.n < 2:
                raise BadParams(f"Ex3 needs n >= 2, got {self.n}")
        elif self.n is not None:
            raise BadParams(f"{self.kind.value} takes no n")

    def label(self) -> str:
        return f"{self.kind.value}(n={self.n})" if self.n is not None else self.kind.value


def excluded_parameters(fid: FixtureId) -> set[Fraction]:
    """Values of lambda for which M_lambda leaves the family."""
    if fid.kind is FixtureKind.EX1:
        return {Fraction(0)}
    if fid.kind is FixtureKind.EX2:
        return {Fraction(0), Fraction(-1)}
    if fid.kind is FixtureKind.EX2_TILDE_D4:
        return {Fraction(0), Fraction(1)}
    return {Fraction(0)} | {Fraction(-1, k) for k in range(1, (fid.n or 0) + 1)}


@dataclass(frozen=True)
class Fixture:
    id: FixtureId
    quiver: Quiver
    relations: RelationSet
    dim: DimensionVector
    system: GeneratorSystem | None
    builder: Callable[[Fraction], dict[str, Any]]

    def module(self, lam: Fraction | int | str) -> RepPoint:
        """M_lambda as an exact point of rep_beta(Q, R)."""
        value = Fraction(lam)
        if value in excluded_parameters(self.id):
            raise BadParams(f"lambda = {value} is excluded for {self.id.label()}")
        return RepPoint.build(self.quiver, self.dim, self.builder(value))


def _relation(*terms: tuple[int, tuple[str, ...]]) -> UniformElement:
    return UniformElement(
        terms=tuple(Term(coeff=Fraction(c), path=Path.of(*arrows)) for c, arrows in terms)
    )


def _ex1() -> tuple[Quiver, RelationSet, list[int], list[str] | None, Callable]:
    q = Quiver(
        vertices=("1",),
        arrows=(Arrow(id="x", tail="1", head="1"), Arrow(id="y", tail="1", head="1")),
    )
    r = RelationSet(
        elements=tuple(
            _relation((1, pair)) for pair in (("x", "x"), ("y", "y"), ("x", "y"), ("y", "x"))
        )
    )

    def build(lam: Fraction) -> dict[str, Any]:
        return {"x": [[0, 1], [0, 0]], "y": [[0, lam], [0, 0]]}

    return q, r, [2], None, build


def _ex2() -> tuple[Quiver, RelationSet, list[int], list[str] | None, Callable]:
    ends = {"x1": ("1", "2"), "x2": ("2", "5"), "x3": ("1", "3"), "x4": ("3", "5"), "x5": ("1", "4"), "x6": ("4", "5")}
    q = Quiver(
        vertices=("1", "2", "3", "4", "5"),
        arrows=tuple(Arrow(id=a, tail=t, head=h) for a, (t, h) in ends.items()),
    )
    r = RelationSet(elements=(_relation((1, ("x1", "x2")), (1, ("x3", "x4")), (1, ("x5", "x6"))),))

    def build(lam: Fraction) -> dict[str, Any]:
        values = {"x1": 1, "x2": 1, "x3": 1, "x4": lam, "x5": 1, "x6": -1 - lam}
        return {a: [[v]] for a, v in values.items()}

    return q, r, [1, 1, 1, 1, 1], ["x1*x2 + x3*x4 + x5*x6"], build


def _ex2_tilde_d4() -> tuple[Quiver, RelationSet, list[int], list[str] | None, Callable]:
    q = Quiver(
        vertices=("1", "2", "3", "4", "5"),
        arrows=(
            Arrow(id="a1", tail="1", head="5"),
            Arrow(id="a2", tail="2", head="5"),
            Arrow(id="a3", tail="5", head="3"),
            Arrow(id="a4", tail="5", head="4"),
        ),
    )

    def build(lam: Fraction) -> dict[str, Any]:
        return {"a1": [[1], [0]], "a2": [[0], [1]], "a3": [[1, 1]], "a4": [[1, lam]]}

    return q, RelationSet(), [1, 1, 1, 1, 2], None, build


def _ex3(n: int) -> tuple[Quiver, RelationSet, list[int], list[str] | None, Callable]:
    sink = str(n + 3)
    ks = range(1, n + 3)
    arrows = [Arrow(id=f"x{k}", tail="0", head=str(k)) for k in ks]
    arrows += [Arrow(id=f"y{k}", tail=str(k), head=sink) for k in ks]
    q = Quiver(vertices=tuple(str(i) for i in range(n + 4)), arrows=tuple(arrows))
    r = RelationSet(
        elements=tuple(
            _relation((1, ("x1", "y1")), (k, ("x2", "y2")), (1, (f"x{k + 2}", f"y{k + 2}")))
            for k in range(1, n + 1)
        )
    )
    relations = [f"x1*y1 + {k}*x2*y2 + x{k + 2}*y{k + 2}" for k in range(1, n + 1)]

    def build(lam: Fraction) -> dict[str, Any]:
        mats: dict[str, Any] = {f"x{k}": [[1]] for k in ks}
        mats["y1"] = [[1]]
        mats["y2"] = [[lam]]
        for k in range(1, n + 1):
            mats[f"y{k + 2}"] = [[-1 - k * lam]]
        return mats

    return q, r, [1] * (n + 4), relations, build


def build_fixture(fid: FixtureId) -> Fixture:
    """Quiver, relations, dimension vector, generator system (Ex2, Ex3) and M_lambda builder."""
    fid.check()
    if fid.kind is FixtureKind.EX1:
        parts = _ex1()
    elif fid.kind is FixtureKind.EX2:
        parts = _ex2()
    elif fid.kind is FixtureKind.EX2_TILDE_D4:
        parts = _ex2_tilde_d4()
    else:
        parts = _ex3(fid.n)  # type: ignore[arg-type]
    q, r, dims, relations, build = parts
    system = arrow_coordinate_system(q, relations) if relations is not None else None
    return Fixture(fid, q, r, dimension_vector(q, dims), system, build)


def sample_parameters(fid: FixtureId, rng: random.Random, count: int) -> list[Fraction]:
    """`count` distinct admissible rational parameters."""
    excluded = excluded_parameters(fid)
    chosen: list[Fraction] = []
    while len(chosen) < count:
        lam = Fraction(rng.randint(*LAMBDA_NUMERATORS), rng.randint(1, LAMBDA_MAX_DENOMINATOR))
        if lam not in excluded and lam not in chosen:
            chosen.append(lam)
    return chosen


class ClaimResult(BaseModel):
    name: str
    description: str
    expected: Any
    computed: Any
    passed: bool


class ExampleReport(BaseModel):
    fixture: str
    seed: int
    claims: list[ClaimResult] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, name: str, description: str, expected: Any, computed: Any) -> None:
        passed = expected == computed
        if not passed:
            logger.warning(f"{self.fixture}: claim {name} failed (expected {expected}, got {computed})")
        self.claims.append(
            ClaimResult(
                name=name, description=description, expected=expected, computed=computed, passed=passed
            )
        )


def _presentation_claim(report: ExampleReport, fx: Fixture) -> None:
    issues = [i.message for i in validate_quiver(fx.quiver, fx.relations).issues]
    report.claim("presentation_valid", "quiver and relations pass validation", [], issues)


def _si_claims(report: ExampleReport, system: GeneratorSystem, chi: list[int], count: int, box: int) -> None:
    """Claims shared by the generator systems of Ex2 and Ex3."""
    mw = minimal_double_weight(system, box)
    report.claim("minimal_weight", "minimal weight with two monomials", chi, mw.chi.to_list())
    report.claim("chi_monomial_count", "number of chi-monomials", count, mw.count)
    report.claim("ci_codimension", "complete-intersection codimension count - 2", count - 2, mw.codim)
    report.claim("chi_unique_in_box", "no competing minimal weight within the box", True, mw.unique_in_box)
    report.claim(
        "chi_pairs_coprime",
        "every pair of chi-monomials is coprime",
        True,
        all(pair.coprime for pair in monomial_pairs(mw)),
    )
    report.claim(
        "dim_si_chi", "dim SI_chi modulo the relations", 2, weight_space_dim_symbolic(system, mw.chi, box)
    )
    predicted, symbolic = [], []
    for k in (1, 2, 3):
        sigma = mw.chi * k
        predicted.append(weight_remainder(sigma, mw, system, box).predicted_dim)
        symbolic.append(weight_space_dim_symbolic(system, sigma, box))
    report.claim("remainder_prediction", "predicted n+1 equals symbolic dim at chi, 2chi, 3chi", predicted, symbolic)
    report.claim(
        "jacobian_rank", "Jacobian rank equals the number of relations", len(system.relations), jacobian_rank(system, report.seed)
    )


def _verify_ex1(fx: Fixture, rng: random.Random, report: ExampleReport) -> None:
    pairs = EXAMPLE_SETTINGS.ex1_pairs
    lams = sample_parameters(fx.id, rng, 2 * pairs)
    modules = [fx.module(lam) for lam in lams]
    _presentation_claim(report, fx)
    report.claim("relations_hold", "M_lambda satisfies x^2, y^2, xy, yx", len(modules), sum(is_point_of(m, fx.relations) for m in modules))
    report.claim("end_dim", "dim End(M_lambda)", [2] * len(modules), [end_dim(m) for m in modules])
    report.claim(
        "orbit_dim",
        "orbit dim = dim GL - end dim",
        [2] * len(modules),
        [orbit_dimension(m) for m in modules],
    )
    verdicts = [
        is_isomorphic(modules[2 * i], modules[2 * i + 1], seed=report.seed).verdict for i in range(pairs)
    ]
    report.claim("non_isomorphic", "sampled pairs M_lambda, M_mu are not isomorphic", ["no"] * pairs, verdicts)
    thetas = king_screening(fx.quiver, fx.dim, EXAMPLE_SETTINGS.box)
    report.claim("si_trivial", "only theta = 0 satisfies theta . beta = 0", [[0]], [t.to_list() for t in thetas])


def _verify_ex2(fx: Fixture, rng: random.Random, report: ExampleReport) -> None:
    assert fx.system is not None
    lams = sample_parameters(fx.id, rng, EXAMPLE_SETTINGS.ex2_brick_samples)
    modules = [fx.module(lam) for lam in lams]
    _presentation_claim(report, fx)
    report.claim("relations_hold", "M_lambda satisfies the relation", len(modules), sum(is_point_of(m, fx.relations) for m in modules))
    report.claim("bricks", "every sampled M_lambda is a brick", len(modules), sum(is_brick(m).is_brick for m in modules))

    m = modules[0]
    values = [m.field.to_rational(x) for x in fx.system.generator_values(m)]
    component = ambient_dimension(fx.quiver, fx.dim) - jacobian_rank_at(fx.system, values)
    orbit = orbit_dimension(m)
    report.claim(
        "orbit_data",
        "dim GL, end dim, orbit dim, component dim, orbit codim",
        {"gl_dim": 5, "end_dim": 1, "orbit_dim": 4, "component_dim": 5, "codim": 1},
        {
            "gl_dim": fx.dim.gl_dimension(),
            "end_dim": end_dim(m),
            "orbit_dim": orbit,
            "component_dim": component,
            "codim": component - orbit,
        },
    )
    box = EXAMPLE_SETTINGS.box
    _si_claims(report, fx.system, [1, 0, 0, 0, -1], 3, box)
    chi = Weight(fx.quiver.vertices, (1, 0, 0, 0, -1))
    report.claim("dim_si_2chi", "dim SI_2chi modulo the relation", 3, weight_space_dim_symbolic(fx.system, chi * 2, box))
    mf = multiplicity_free_in_box(fx.system, box)
    report.claim(
        "not_multiplicity_free",
        "some weight space has dim >= 2, first witness chi",
        {"multiplicity_free": False, "witness": chi.to_list()},
        {"multiplicity_free": mf.multiplicity_free, "witness": mf.witness.to_list() if mf.witness else None},
    )


def _verify_ex2_tilde_d4(fx: Fixture, rng: random.Random, report: ExampleReport) -> None:
    lams = sample_parameters(fx.id, rng, EXAMPLE_SETTINGS.ex2_brick_samples)
    modules = [fx.module(lam) for lam in lams]
    _presentation_claim(report, fx)
    report.claim("root_class", "d is an isotropic Schur root", RootClass.ISOTROPIC.value, classify_root(fx.quiver, fx.dim, report.seed).value)
    pr = prehomogeneity_report(fx.quiver, fx.dim, report.seed)
    report.claim(
        "almost_prehomogeneous",
        "canonical decomposition is a single isotropic root",
        {"almost_prehomogeneous": True, "conclusion": "CompleteIntersection"},
        {"almost_prehomogeneous": pr.almost_prehomogeneous, "conclusion": pr.conclusion.value},
    )
    report.claim("bricks", "four distinct lines give a brick", len(modules), sum(is_brick(m).is_brick for m in modules))
    report.claim("orbit_codim", "orbit codimension of M_lambda", [1] * len(modules), [orbit_codim_hereditary(m).codim for m in modules])


def _verify_ex3(fx: Fixture, rng: random.Random, report: ExampleReport) -> None:
    assert fx.system is not None
    n = fx.id.n or 0
    system = fx.system
    lams = sample_parameters(fx.id, rng, EXAMPLE_SETTINGS.ex3_lambda_samples)
    modules = [fx.module(lam) for lam in lams]
    _presentation_claim(report, fx)
    report.claim("relations_hold", f"M_lambda satisfies all {n} relations", len(modules), sum(is_point_of(m, fx.relations) for m in modules))
    _si_claims(report, system, [1] + [0] * (n + 2) + [-1], n + 2, EXAMPLE_SETTINGS.box)

    p, q = system.monomial("x1", "y1"), system.monomial("x2", "y2")
    results = [phi_value(p, q, system, m, seed=report.seed) for m in modules]
    report.claim("phi_values", "phi(x1y1, x2y2)(M_lambda) = lambda", [str(lam) for lam in lams], [str(r.alpha) for r in results])
    report.claim(
        "pencil_vanishes_on_orbit",
        "h_alpha vanishes at M_lambda and at random points of its orbit",
        True,
        all(r.vanishes_at_point and r.orbit_checks_passed == r.orbit_checks for r in results),
    )

    expected = [
        expand(sympify(f"{k}*x2*y2 - x3*y3 + x{k + 3}*y{k + 3}")) for k in range(1, n)
    ]
    computed = [expand(d) for d in relation_differences(system)]
    report.claim(
        "relation_differences",
        "H_(k+1) - H_1 = k x2y2 - x3y3 + x_(k+3)y_(k+3)",
        [str(e) for e in expected],
        [str(c) for c in computed],
    )
    report.claim(
        "trinomials_coprime",
        "every defining relation is a trinomial with pairwise coprime terms",
        [True] * n,
        [t.pairwise_coprime for t in trinomial_relations(system)],
    )


_VERIFIERS = {
    FixtureKind.EX1: _verify_ex1,
    FixtureKind.EX2: _verify_ex2,
    FixtureKind.EX2_TILDE_D4: _verify_ex2_tilde_d4,
    FixtureKind.EX3: _verify_ex3,
}


def verify_example(fid: FixtureId, seed: int = 0) -> ExampleReport:
    """Run the claim checklist of a fixture; failures are report entries, not exceptions."""
    fx = build_fixture(fid)
    report = ExampleReport(fixture=fid.label(), seed=seed)
    logger.info(f"Verifying {fid.label()} with seed {seed}")
    _VERIFIERS[fid.kind](fx, random.Random(seed), report)
    return report
