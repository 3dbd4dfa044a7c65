"""Tests for exact linear algebra and lattice enumeration."""

import itertools
import random
from fractions import Fraction

import pytest
from sympy import Rational

from quiver_semi_invariants.algebra.lattice import nonneg_lattice_solutions
from quiver_semi_invariants.algebra.linalg import (
    RATIONALS,
    Field,
    Matrix,
    characteristic_polynomial,
    column_space,
    inverse,
    is_invertible,
    matrix_power,
    parse_field,
    polynomial_at,
    random_matrix,
    rank,
    rank_kernel,
)
from quiver_semi_invariants.errors import BadParams, ShapeMismatch


def rational_matrix(rows: list[list]) -> Matrix:
    return Matrix.from_rows(RATIONALS, rows)


class TestField:
    """Tests for Field and parse_field."""

    def test_convert_accepts_exact_inputs(self):
        """Fractions, strings and sympy rationals convert to the same element."""
        values = [RATIONALS.convert(x) for x in (Fraction(3, 2), "3/2", Rational(3, 2))]
        assert values[0] == values[1] == values[2]
        assert RATIONALS.to_str(values[0]) == "3/2"

    def test_prime_field_uses_symmetric_representatives(self):
        """Residues print in the symmetric range."""
        f = Field(7)
        assert f.to_rational(f.convert(6)) == -1
        assert f.name == "p:7"

    def test_parse_field_rational(self):
        """'rational' selects QQ."""
        assert parse_field("rational") == RATIONALS
        assert parse_field(" QQ ") == RATIONALS

    def test_parse_field_prime(self):
        """'p:N' selects GF(N) for a large prime."""
        assert parse_field("p:32003").modulus == 32003

    def test_parse_field_rejects_composite(self):
        """A composite modulus is a BadParams error."""
        with pytest.raises(BadParams, match="not prime"):
            parse_field("p:32004")

    def test_parse_field_rejects_small_prime(self):
        """Primes below the sampling minimum are refused."""
        with pytest.raises(BadParams, match="too small"):
            parse_field("p:101")

    def test_parse_field_rejects_unknown_name(self):
        """Only rational and prime fields exist."""
        with pytest.raises(BadParams):
            parse_field("complex")


class TestMatrix:
    """Tests for Matrix arithmetic."""

    def test_multiplication(self):
        """Product of 2x2 matrices."""
        a = rational_matrix([[1, 2], [3, 4]])
        b = rational_matrix([[0, 1], [1, 0]])
        assert (a @ b).to_strings() == [["2", "1"], ["4", "3"]]

    def test_shape_mismatch(self):
        """Incompatible shapes raise ShapeMismatch."""
        with pytest.raises(ShapeMismatch):
            rational_matrix([[1, 2]]) @ rational_matrix([[1, 2]])

    def test_ragged_rows_rejected(self):
        """All rows must have the same length."""
        with pytest.raises(ShapeMismatch):
            rational_matrix([[1, 2], [3]])

    def test_zero_row_matrix_keeps_columns(self):
        """A 0x3 matrix remembers its width."""
        m = Matrix.from_rows(RATIONALS, [], 3)
        assert m.shape == (0, 3)
        assert rank(m) == 0

    def test_block_diagonal(self):
        """Blocks sit on the diagonal with zeros elsewhere."""
        a = rational_matrix([[1, 2]])
        b = rational_matrix([[3], [4]])
        assert a.block_diagonal(b).to_strings() == [["1", "2", "0"], ["0", "0", "3"], ["0", "0", "4"]]

    def test_matrix_power(self):
        """Powers of a nilpotent Jordan block vanish."""
        n = rational_matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert not matrix_power(n, 2).is_zero()
        assert matrix_power(n, 3).is_zero()


class TestRankKernel:
    """Tests for rank, kernels and inverses."""

    def test_rank_over_rationals(self):
        """Rank of a matrix with a dependent row."""
        m = rational_matrix([[1, 2, 3], [2, 4, 6], [1, 0, "1/2"]])
        assert rank(m) == 2

    def test_rank_agrees_with_rref_over_prime_field(self):
        """The prime-field rank can drop where the rational rank does not."""
        rows = [[1, 1], [1, 8]]
        assert rank(rational_matrix(rows)) == 2
        assert rank(Matrix.from_rows(Field(7), rows)) == 1

    def test_kernel_vectors_are_annihilated(self):
        """rank + nullity = columns and every kernel vector maps to 0."""
        m = rational_matrix([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
        rk = rank_kernel(m)
        assert rk.rank + len(rk.kernel) == m.cols
        for vec in rk.kernel:
            column = Matrix.from_columns(RATIONALS, [vec], m.cols)
            assert (m @ column).is_zero()

    def test_column_space_dimension(self):
        """Column space basis size equals the rank."""
        m = rational_matrix([[1, 2, 3], [2, 4, 6]])
        assert len(column_space(m)) == rank(m) == 1

    def test_inverse(self):
        """m @ inverse(m) is the identity."""
        m = rational_matrix([[2, 1], [5, 3]])
        assert m @ inverse(m) == Matrix.identity(RATIONALS, 2)
        assert is_invertible(m)

    def test_singular_inverse_raises(self):
        """Singular matrices have no inverse."""
        with pytest.raises(ValueError, match="singular"):
            inverse(rational_matrix([[1, 2], [2, 4]]))

    def test_rank_matches_kernel_on_random_matrices(self):
        """rank and rank_kernel agree on random integer matrices."""
        rng = random.Random(3)
        for _ in range(20):
            m = random_matrix(RATIONALS, 4, 5, rng, -2, 2)
            assert rank(m) == rank_kernel(m).rank

    @pytest.mark.parametrize("seed", range(10))
    def test_rank_invariant_under_row_operations(self, seed):
        """Permuting rows and scaling them by nonzero rationals keeps the rank."""
        rng = random.Random(seed)
        rows = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(4)]
        rows.append([a + b for a, b in zip(rows[0], rows[1])])
        shuffled = rows[:]
        rng.shuffle(shuffled)
        scaled = [[Fraction(rng.choice([-3, -1, 2, 5]), 7) * a for a in r] for r in shuffled]
        assert rank(rational_matrix(scaled)) == rank(rational_matrix(rows))

    def test_prime_rank_bounded_by_rational_rank(self):
        """Over GF(32003) the rank never exceeds, and here equals, the rational rank."""
        rng = random.Random(11)
        prime = Field(32003)
        for _ in range(100):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            if rng.random() < 0.5 and r > 1:
                rows[-1] = [a - 2 * b for a, b in zip(rows[0], rows[1 % r])]
            rational_rank = rank(rational_matrix(rows))
            prime_rank = rank(Matrix.from_rows(prime, rows))
            assert prime_rank <= rational_rank
            assert prime_rank == rational_rank

    def test_empty_kernel_shapes(self):
        """A 0x3 matrix has the whole space as kernel."""
        rk = rank_kernel(Matrix.from_rows(RATIONALS, [], 3))
        assert rk.rank == 0
        assert len(rk.kernel) == 3


class TestCharacteristicPolynomial:
    """Tests for characteristic polynomials."""

    def test_swap_matrix(self):
        """The swap matrix has characteristic polynomial t^2 - 1."""
        coeffs = characteristic_polynomial(rational_matrix([[0, 1], [1, 0]]))
        assert [RATIONALS.to_rational(c) for c in coeffs] == [1, 0, -1]

    def test_cayley_hamilton(self):
        """A matrix annihilates its own characteristic polynomial."""
        m = rational_matrix([[1, 2, 0], [0, 3, 1], [4, 0, 1]])
        assert polynomial_at(characteristic_polynomial(m), m).is_zero()


class TestLattice:
    """Tests for nonneg_lattice_solutions."""

    def test_decreasing_lexicographic_order(self):
        """Solutions of a + b = 2 come out largest first."""
        assert nonneg_lattice_solutions([[1, 1]], [2], 2) == [(2, 0), (1, 1), (0, 2)]

    def test_bound_cuts_solutions(self):
        """Entries never exceed the bound."""
        assert nonneg_lattice_solutions([[1, 1]], [2], 1) == [(1, 1)]

    def test_signed_coefficients(self):
        """Weights with mixed signs, as for arrow coordinates."""
        # columns: e1 - e2, e2 - e3, e1 - e3
        a = [[1, 0, 1], [-1, 1, 0], [0, -1, -1]]
        assert nonneg_lattice_solutions(a, [1, 0, -1], 3) == [(1, 1, 0), (0, 0, 1)]

    def test_no_solution(self):
        """An unreachable target yields nothing."""
        assert nonneg_lattice_solutions([[2]], [3], 5) == []

    def test_negative_bound(self):
        """A negative bound has no solutions."""
        assert nonneg_lattice_solutions([[1]], [0], -1) == []

    def test_shape_errors(self):
        """Rows must be rectangular and match b."""
        with pytest.raises(ValueError):
            nonneg_lattice_solutions([[1, 1], [1]], [0, 0], 2)
        with pytest.raises(ValueError):
            nonneg_lattice_solutions([[1, 1]], [0, 0], 2)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_brute_force(self, seed):
        """Agrees with filtering the whole box [0, bound]^n."""
        rng = random.Random(seed)
        n, m, bound = rng.randint(1, 4), rng.randint(1, 3), rng.randint(0, 4)
        a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
        x = [rng.randint(0, bound) for _ in range(n)]
        b = [sum(c * v for c, v in zip(row, x)) for row in a]
        expected = [
            p
            for p in itertools.product(range(bound + 1), repeat=n)
            if all(sum(c * v for c, v in zip(row, p)) == t for row, t in zip(a, b))
        ]
        assert nonneg_lattice_solutions(a, b, bound) == sorted(expected, reverse=True)
