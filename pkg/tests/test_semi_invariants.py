"""Tests for generator systems, weight spaces, Jacobians and pencils."""

from fractions import Fraction

import pytest
from sympy import Rational, Symbol

from quiver_semi_invariants.algebra.polynomials import parse_polynomial
from quiver_semi_invariants.algebra.quiver import Weight, dimension_vector
from quiver_semi_invariants.algebra.representations import RepPoint
from quiver_semi_invariants.algebra.semi_invariants import (
    Generator,
    GeneratorSystem,
    PencilElement,
    WeightedMonomial,
    arrow_coordinate_system,
    jacobian_rank,
    jacobian_rank_at,
    king_screening,
    minimal_double_weight,
    monomial_pairs,
    monomials_of_weight,
    multiplicity_free_in_box,
    phi_value,
    relation_differences,
    trinomial_relations,
    weight_remainder,
    weight_space_dim_symbolic,
    weight_table,
)
from quiver_semi_invariants.errors import (
    BadParams,
    FileFormatError,
    NoMonomial,
    NonUniformRelation,
    NotFoundInBox,
    PZero,
    UnknownSymbol,
)
from quiver_semi_invariants.example_families import FixtureId, FixtureKind, build_fixture

VERTICES = ["1", "2", "3", "4", "5"]


@pytest.fixture
def ex2_system(ex2_system_document: dict) -> GeneratorSystem:
    generators = [Generator(**g) for g in ex2_system_document["generators"]]
    return GeneratorSystem(VERTICES, generators, ex2_system_document["relations"])


@pytest.fixture
def chi() -> Weight:
    return Weight(tuple(VERTICES), (1, 0, 0, 0, -1))


class TestPolynomials:
    """Tests for polynomial parsing."""

    def test_caret_is_power(self):
        """x^2 means x squared."""
        expr = parse_polynomial("x^2 + 3/2*y", ["x", "y"])
        assert expr == Symbol("x") ** 2 + Rational(3, 2) * Symbol("y")

    def test_unknown_name(self):
        """Names outside the generator list are rejected."""
        with pytest.raises(UnknownSymbol):
            parse_polynomial("x + z", ["x"])

    def test_not_a_polynomial(self):
        """Division by a variable is not polynomial."""
        with pytest.raises(FileFormatError):
            parse_polynomial("1/x", ["x"])

    def test_syntax_error(self):
        """Malformed strings raise FileFormatError."""
        with pytest.raises(FileFormatError):
            parse_polynomial("x +* )", ["x"])

    @pytest.mark.parametrize(
        "text",
        [
            "x + 0*__import__('os').getcwd().__len__()",
            "x + x.__class__",
            "x + 0.5",
            "x + open(x)",
            "x + eval(x)",
        ],
    )
    def test_only_polynomial_syntax_reaches_the_parser(self, text):
        """Dunders, attributes, strings, floats and function calls are refused."""
        with pytest.raises(FileFormatError):
            parse_polynomial(text, ["x"])

    def test_relation_text_cannot_run_code(self, temp_dir, ex2_system_document: dict):
        """A relation that tries to touch the filesystem is rejected and leaves no trace."""
        marker = temp_dir / "marker"
        generators = [Generator(**g) for g in ex2_system_document["generators"]]
        relation = f"x1*x2 + 0*__import__('pathlib').Path({str(marker)!r}).touch().__class__.__name__.__len__()"
        with pytest.raises(FileFormatError):
            GeneratorSystem(VERTICES, generators, [relation])
        assert not marker.exists()


class TestGeneratorSystem:
    """Tests for GeneratorSystem construction."""

    def test_duplicate_names(self):
        """Generator names are unique."""
        g = Generator(name="f", weight={"1": 1})
        with pytest.raises(FileFormatError, match="duplicate"):
            GeneratorSystem(["1"], [g, g])

    def test_non_homogeneous_relation(self, ex2_system_document: dict):
        """Relations must be weight-homogeneous."""
        generators = [Generator(**g) for g in ex2_system_document["generators"]]
        with pytest.raises(NonUniformRelation):
            GeneratorSystem(VERTICES, generators, ["x1 + x2"])

    def test_zero_relation(self, ex2_system_document: dict):
        """A relation that cancels to zero is rejected."""
        generators = [Generator(**g) for g in ex2_system_document["generators"]]
        with pytest.raises(FileFormatError, match="zero"):
            GeneratorSystem(VERTICES, generators, ["x1*x2 - x1*x2"])

    def test_unknown_generator_in_relation(self, ex2_system_document: dict):
        """Relations only use generator names."""
        generators = [Generator(**g) for g in ex2_system_document["generators"]]
        with pytest.raises(UnknownSymbol):
            GeneratorSystem(VERTICES, generators, ["x1*x9"])

    def test_arrow_coordinate_weights(self, a3):
        """Arrow coordinates are weighted e_tail - e_head."""
        system = arrow_coordinate_system(a3, [])
        assert [w.entries for w in system.weights] == [(1, -1, 0), (0, 1, -1)]
        assert system.coordinates == ("a", "b")

    def test_monomial_by_names(self, ex2_system):
        """Monomials can be named by their factors."""
        m = ex2_system.monomial("x1", "x2", "x2")
        assert ex2_system.label(m) == "x1*x2^2"
        with pytest.raises(BadParams):
            ex2_system.monomial("y")

    def test_realization_weight_check(self, kronecker):
        """A realization of the wrong torus weight is reported."""
        dim = dimension_vector(kronecker, "1,1")
        good = Generator(name="f", weight={"1": 1, "2": -1}, realization="a + 2*b")
        bad = Generator(name="g", weight={"1": 1, "2": -1}, realization="a*b")
        system = GeneratorSystem(kronecker.vertices, [good, bad], [], (kronecker, dim))
        problems = system.check_realizations()
        assert len(problems) == 1
        assert "realization of g" in problems[0]


class TestWeights:
    """Tests for monomial enumeration and the minimal weight."""

    def test_chi_monomials(self, ex2_system, chi):
        """Three monomials have weight e1 - e5."""
        labels = [ex2_system.label(m) for m in monomials_of_weight(ex2_system, chi, 3)]
        assert labels == ["x1*x2", "x3*x4", "x5*x6"]

    def test_weight_table_order(self, ex2_system):
        """Degree-one weights come first and the zero weight is skipped."""
        cells = weight_table(ex2_system, 2)
        assert all(c.min_degree == 1 for c in cells[:6])
        assert all(not c.weight.is_zero() for c in cells)

    def test_minimal_double_weight(self, ex2_system, chi):
        """chi = e1 - e5 with three monomials, a hypersurface."""
        report = minimal_double_weight(ex2_system, 3)
        assert report.chi == chi
        assert (report.count, report.codim, report.unique_in_box) == (3, 1, True)
        assert report.to_dict(ex2_system)["monomials"] == ["x1*x2", "x3*x4", "x5*x6"]

    def test_no_double_weight(self, a3):
        """A path quiver has no weight with two monomials."""
        with pytest.raises(NotFoundInBox):
            minimal_double_weight(arrow_coordinate_system(a3, []), 4)

    def test_bad_box(self, ex2_system):
        """The box must be positive."""
        with pytest.raises(BadParams):
            minimal_double_weight(ex2_system, 0)

    def test_monomial_pairs_are_coprime(self, ex2_system):
        """All chi-monomial pairs have disjoint supports."""
        pairs = monomial_pairs(minimal_double_weight(ex2_system, 3))
        assert len(pairs) == 3
        assert all(p.coprime for p in pairs)


class TestDimensions:
    """Tests for weight-space dimensions and remainders."""

    def test_symbolic_dims(self, ex2_system, chi):
        """dim SI_kchi = k + 1 for the hypersurface."""
        dims = [weight_space_dim_symbolic(ex2_system, chi * k, 3) for k in (1, 2, 3)]
        assert dims == [2, 3, 4]

    def test_remainder_predictions(self, ex2_system, chi):
        """The remainder of kchi is zero and predicts k + 1."""
        report = minimal_double_weight(ex2_system, 3)
        result = weight_remainder(chi * 2, report, ex2_system, 3)
        assert result.n == 2
        assert result.rem.is_zero()
        assert result.predicted_dim == 3

    def test_remainder_of_mixed_weight(self, ex2_system, chi):
        """chi + weight(x1) has n = 1 and remainder weight(x1)."""
        report = minimal_double_weight(ex2_system, 3)
        sigma = chi + ex2_system.weights[0]
        result = weight_remainder(sigma, report, ex2_system, 3)
        assert result.n == 1
        assert result.rem == ex2_system.weights[0]
        assert result.predicted_dim == 2
        assert weight_space_dim_symbolic(ex2_system, sigma, 3) == 2

    def test_unrealized_weight(self, ex2_system, chi):
        """-chi carries no monomial."""
        report = minimal_double_weight(ex2_system, 3)
        with pytest.raises(NoMonomial):
            weight_remainder(-chi, report, ex2_system, 3)

    def test_realized_rank_without_relations(self, kronecker):
        """Generators with proportional realizations span one dimension."""
        dim = dimension_vector(kronecker, "1,1")
        weight = {"1": 1, "2": -1}
        generators = [
            Generator(name="f", weight=weight, realization="a"),
            Generator(name="g", weight=weight, realization="2*a"),
        ]
        system = GeneratorSystem(kronecker.vertices, generators, [], (kronecker, dim))
        sigma = Weight(kronecker.vertices, (1, -1))
        assert weight_space_dim_symbolic(system, sigma, 2) == 1

    def test_multiplicity(self, ex2_system, chi):
        """chi witnesses that the ring is not multiplicity free."""
        report = multiplicity_free_in_box(ex2_system, 3)
        assert not report.multiplicity_free
        assert report.witness == chi
        assert report.witness_dim == 2

    def test_kronecker_coordinates_multiplicity(self, kronecker):
        """Two arrow coordinates of the same weight already give dim 2."""
        system = arrow_coordinate_system(kronecker, [])
        report = multiplicity_free_in_box(system, 2)
        assert not report.multiplicity_free
        assert report.witness.entries == (1, -1)

    def test_multiplicity_is_monotone_in_the_box(self, ex2_system, a3, kronecker):
        """Once a box shows multiplicity, every larger box does too."""
        systems = [
            ex2_system,
            arrow_coordinate_system(a3, []),
            arrow_coordinate_system(kronecker, []),
            build_fixture(FixtureId(kind=FixtureKind.EX3, n=2)).system,
        ]
        for system in systems:
            free = [multiplicity_free_in_box(system, box).multiplicity_free for box in (1, 2, 3)]
            assert free == sorted(free, reverse=True)
        assert [multiplicity_free_in_box(ex2_system, box).multiplicity_free for box in (1, 2)] == [True, False]


class TestJacobian:
    """Tests for Jacobian ranks."""

    def test_hypersurface_rank(self, ex2_system):
        """One relation, rank one at a random point."""
        assert jacobian_rank(ex2_system, seed=3) == 1

    def test_rank_drops_at_origin(self, ex2_system):
        """All partial derivatives of a quadric vanish at 0."""
        assert jacobian_rank_at(ex2_system, [Rational(0)] * 6) == 0

    def test_no_relations(self, a3):
        """A free system has Jacobian rank 0."""
        assert jacobian_rank(arrow_coordinate_system(a3, [])) == 0

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_ex3_relations_are_independent(self, n):
        """Ex3(n) has n relations with a Jacobian of full rank."""
        system = build_fixture(FixtureId(kind=FixtureKind.EX3, n=n)).system
        assert len(system.relations) == n
        assert jacobian_rank(system, seed=n) == n


class TestRelations:
    """Tests for trinomials and relation differences."""

    def test_trinomial(self, ex2_system):
        """x1x2 + x3x4 + x5x6 is a trinomial with coprime terms."""
        (t,) = trinomial_relations(ex2_system)
        assert t.pairwise_coprime

    def test_single_relation_has_no_differences(self, ex2_system):
        """With one relation there is nothing to subtract."""
        assert relation_differences(ex2_system) == []


class TestPencils:
    """Tests for phi_value and pencil elements."""

    def test_phi_on_ex2_module(self):
        """q(M)/p(M) recovers lambda for p = x1x2, q = x3x4."""
        fx = build_fixture(FixtureId(kind=FixtureKind.EX2))
        system = fx.system
        result = phi_value(system.monomial("x1", "x2"), system.monomial("x3", "x4"), system, fx.module(Fraction(5, 3)), seed=1)
        assert result.alpha == Rational(5, 3)
        assert result.vanishes_at_point
        assert result.orbit_checks_passed == result.orbit_checks

    def test_pencil_evaluates_to_zero(self):
        """h_alpha vanishes at a module with phi-value alpha."""
        fx = build_fixture(FixtureId(kind=FixtureKind.EX2))
        system = fx.system
        pencil = PencilElement(Rational(2), system.monomial("x1", "x2"), system.monomial("x3", "x4"))
        assert not pencil.evaluate(system, fx.module(2))
        assert pencil.evaluate(system, fx.module(3))

    def test_p_zero(self):
        """A vanishing denominator raises PZero."""
        fx = build_fixture(FixtureId(kind=FixtureKind.EX2))
        system = fx.system
        mats = {"x1": [[0]], "x2": [[1]], "x3": [[1]], "x4": [[1]], "x5": [[1]], "x6": [[-1]]}
        v = RepPoint.build(fx.quiver, fx.dim, mats)
        with pytest.raises(PZero):
            phi_value(system.monomial("x1", "x2"), system.monomial("x3", "x4"), system, v)

    def test_different_weights(self):
        """p and q must have the same weight."""
        fx = build_fixture(FixtureId(kind=FixtureKind.EX2))
        system = fx.system
        with pytest.raises(BadParams):
            phi_value(system.monomial("x1"), system.monomial("x3"), system, fx.module(2))

    def test_weighted_monomial_helpers(self):
        """Divisibility and coprimality work on exponent vectors."""
        p, q = WeightedMonomial((1, 1, 0)), WeightedMonomial((0, 0, 2))
        assert p.is_coprime(q)
        assert p.divides(p * q)
        assert not (p * q).divides(p)
        assert (p * q).degree == 4


class TestKingScreening:
    """Tests for king_screening."""

    def test_single_vertex(self, jordan):
        """Only theta = 0 pairs to zero with a nonzero dimension."""
        thetas = king_screening(jordan, dimension_vector(jordan, "2"), 3)
        assert [t.entries for t in thetas] == [(0,)]

    def test_multi_vertex_rejected(self, a2):
        """Screening is limited to one vertex."""
        with pytest.raises(BadParams):
            king_screening(a2, dimension_vector(a2, "1,1"), 2)
