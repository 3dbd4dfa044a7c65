"""
Exact linear algebra over the rationals and prime fields.

Scalars are sympy domain elements (QQ or GF(p)); a Field wraps the domain
so that every Matrix knows where its entries live. Matrix wraps a sympy
DomainMatrix and delegates products, ranks, kernels and inverses to it.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any

from sympy import GF, QQ, Rational, isprime
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from quiver_semi_invariants.errors import BadParams, ShapeMismatch
from quiver_semi_invariants.settings import get_settings

logger = logging.getLogger(__name__)

Scalar = Any
Vector = tuple[Scalar, ...]

MIN_SAMPLING_PRIME = get_settings().sampling.min_prime
DEFAULT_PRIME = get_settings().sampling.prime


@lru_cache(maxsize=8)
def _prime_domain(modulus: int) -> Any:
    return GF(modulus)


@dataclass(frozen=True)
class Field:
    """The coefficient field of a computation: QQ, or GF(p) when modulus is set."""

    modulus: int | None = None

    @property
    def domain(self) -> Any:
        return QQ if self.modulus is None else _prime_domain(self.modulus)

    @property
    def name(self) -> str:
        return "rational" if self.modulus is None else f"p:{self.modulus}"

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def convert(self, value: Any) -> Scalar:
        """Convert an int, Fraction, numeric string or sympy number into this field."""
        if not isinstance(value, (int, str, Fraction)) and self.domain.of_type(value):
            return value
        if isinstance(value, int):
            return self.domain.convert(value)
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
        else:
            r = Rational(value)
            num, den = int(r.p), int(r.q)
        return self.domain.convert(num) / self.domain.convert(den)

    def to_rational(self, x: Scalar) -> Rational:
        """Sympy number for x; prime residues use the symmetric representative."""
        return self.domain.to_sympy(x)

    def to_str(self, x: Scalar) -> str:
        return str(self.to_rational(x))

    def random_element(self, rng: random.Random, low: int, high: int) -> Scalar:
        return self.domain.convert(rng.randint(low, high))


RATIONALS = Field()


def parse_field(text: str, min_prime: int = MIN_SAMPLING_PRIME) -> Field:
    """Parse "rational" or "p:PRIME"; a bare "p" selects the configured default prime."""
    text = text.strip().lower()
    if text in ("rational", "q", "qq"):
        return RATIONALS
    if text in ("p", "p:"):
        return Field(DEFAULT_PRIME)
    if not text.startswith("p:"):
        raise BadParams(f"unknown field {text!r}; use 'rational' or 'p:PRIME'")
    try:
        modulus = int(text[2:])
    except ValueError as e:
        raise BadParams(f"field modulus must be an integer, got {text[2:]!r}") from e
    if not isprime(modulus):
        raise BadParams(f"field modulus {modulus} is not prime")
    if modulus < min_prime:
        raise BadParams(f"prime {modulus} is too small for sampling (need at least {min_prime})")
    return Field(modulus)


@dataclass(frozen=True, eq=False)
class Matrix:
    """A dense matrix over a single Field, backed by a sympy DomainMatrix."""

    field: Field
    dm: DomainMatrix

    @classmethod
    def from_entries(cls, field: Field, rows: int, cols: int, data: list[list[Scalar]]) -> "Matrix":
        """Wrap entries that already live in field.domain."""
        return cls(field, DomainMatrix([list(r) for r in data], (rows, cols), field.domain).to_dense())

    @classmethod
    def from_rows(cls, field: Field, rows: list[list[Any]], cols: int | None = None) -> "Matrix":
        """Build a matrix, converting every entry; `cols` is needed only for zero-row matrices."""
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            raise ShapeMismatch("matrix rows have different lengths")
        if cols is not None and rows and width != cols:
            raise ShapeMismatch(f"expected {cols} columns, got {width}")
        converted = [[field.convert(x) for x in r] for r in rows]
        return cls.from_entries(field, len(rows), width, converted)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, DomainMatrix.zeros((rows, cols), field.domain).to_dense())

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, DomainMatrix.eye(n, field.domain).to_dense())

    @classmethod
    def from_columns(cls, field: Field, columns: list[Vector], rows: int) -> "Matrix":
        return cls.from_entries(field, rows, len(columns), [[col[i] for col in columns] for i in range(rows)])

    @property
    def rows(self) -> int:
        return self.dm.shape[0]

    @property
    def cols(self) -> int:
        return self.dm.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.dm.shape

    @cached_property
    def entries(self) -> tuple[tuple[Scalar, ...], ...]:
        return tuple(tuple(r) for r in self.dm.to_list())

    def __getitem__(self, index: tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def _wrap(self, dm: DomainMatrix) -> "Matrix":
        return Matrix(self.field, dm.to_dense())

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return self._wrap(self.dm * other.dm)

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes differ: {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return self._wrap(self.dm + other.dm)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return self._wrap(self.dm - other.dm)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries))

    def scale(self, c: Scalar) -> "Matrix":
        return self._wrap(self.dm * self.field.convert(c))

    def transpose(self) -> "Matrix":
        return self._wrap(self.dm.transpose())

    def block(self, row_start: int, row_end: int, col_start: int, col_end: int) -> "Matrix":
        return self._wrap(self.dm.extract(range(row_start, row_end), range(col_start, col_end)))

    def block_diagonal(self, other: "Matrix") -> "Matrix":
        """[[self, 0], [0, other]]."""
        top = self.dm.hstack(DomainMatrix.zeros((self.rows, other.cols), self.field.domain).to_dense())
        bottom = DomainMatrix.zeros((other.rows, self.cols), self.field.domain).to_dense().hstack(other.dm)
        return self._wrap(top.vstack(bottom))

    def is_zero(self) -> bool:
        return self.dm.is_zero_matrix

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_strings(self) -> list[list[str]]:
        return [[self.field.to_str(a) for a in r] for r in self.entries]

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {self.to_strings()})"


@dataclass(frozen=True)
class RankKernel:
    """Rank of a matrix together with a basis of its right kernel."""

    rank: int
    kernel: list[Vector]


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return m.dm.rank()


def rank_kernel(m: Matrix) -> RankKernel:
    """Rank and a kernel basis with rank + len(kernel) == cols."""
    if m.rows == 0 or m.cols == 0:
        ident = Matrix.identity(m.field, m.cols)
        return RankKernel(0, [ident.column(j) for j in range(m.cols)])
    reduced, pivots = m.dm.rref()
    null = reduced.nullspace_from_rref(list(pivots)).to_dense()
    return RankKernel(len(pivots), [tuple(r) for r in null.to_list()])


def column_space(m: Matrix) -> list[Vector]:
    """A basis of the column space, taken from the pivot columns of m."""
    if m.rows == 0 or m.cols == 0:
        return []
    basis = m._wrap(m.dm.columnspace())
    return [basis.column(j) for j in range(basis.cols)]


def is_invertible(m: Matrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ShapeMismatch(f"cannot invert a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return m
    try:
        return m._wrap(m.dm.inv())
    except DMNonInvertibleMatrixError as e:
        raise ValueError("matrix is singular") from e


def matrix_power(m: Matrix, k: int) -> Matrix:
    if m.rows == 0:
        return m
    return m._wrap(m.dm**k)


def characteristic_polynomial(m: Matrix) -> list[Scalar]:
    """Coefficients of det(tI - m), leading coefficient first."""
    if m.rows == 0:
        return [m.field.one]
    return list(m.dm.charpoly())


def polynomial_at(coeffs: list[Scalar], m: Matrix) -> Matrix:
    """Evaluate a polynomial (leading coefficient first) at a square matrix."""
    if m.rows == 0:
        return m
    return m._wrap(m.dm.eval_poly(list(coeffs)))


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random, low: int, high: int) -> Matrix:
    data = [[field.random_element(rng, low, high) for _ in range(cols)] for _ in range(rows)]
    return Matrix.from_entries(field, rows, cols, data)
