"""
Representation points and the linear algebra built on them.

A RepPoint assigns a beta(ha) x beta(ta) matrix to each arrow. Hom spaces are
kernels of the intertwiner equations g_ha V(a) = W(a) g_ta; generic values
are minima over seeded random samples.
"""

import logging
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Literal

from sympy import Poly, Symbol

from quiver_semi_invariants.algebra.linalg import (
    RATIONALS,
    Field,
    Matrix,
    Scalar,
    characteristic_polynomial,
    column_space,
    inverse,
    is_invertible,
    matrix_power,
    polynomial_at,
    random_matrix,
    rank_kernel,
)
from quiver_semi_invariants.algebra.quiver import (
    DimensionVector,
    Path,
    Quiver,
    RelationSet,
    UniformElement,
    euler_form,
)
from quiver_semi_invariants.errors import BadParams, CyclicQuiver, IndexMismatch, ShapeMismatch
from quiver_semi_invariants.settings import get_settings

logger = logging.getLogger(__name__)

_sampling = get_settings().sampling
SAMPLE_RANGE = (_sampling.entry_min, _sampling.entry_max)
DEFAULT_SAMPLES = _sampling.samples
DEFAULT_FITTING_TRIALS = _sampling.fitting_trials
DEFAULT_ISOMORPHISM_TRIALS = _sampling.isomorphism_trials

SPLITTING_CAVEAT = (
    "Monte Carlo: a summand is declared indecomposable after repeated trivial "
    "Fitting splits unless its endomorphism ring is one-dimensional"
)


def require_samples(samples: int) -> None:
    if samples < 1:
        raise BadParams(f"samples must be at least 1, got {samples}")


def derive_seed(seed: int, index: int) -> int:
    """Seed for the index-th independent task of a computation seeded with `seed`."""
    return seed ^ index


def coordinate_name(arrow_id: str, i: int, j: int, rows: int, cols: int) -> str:
    """Name of entry (i, j) of V(arrow): the arrow id itself for 1x1 blocks."""
    if rows == 1 and cols == 1:
        return arrow_id
    return f"{arrow_id}_{i + 1}_{j + 1}"


@dataclass(frozen=True, eq=False)
class RepPoint:
    """A point of rep_beta(Q): one exact matrix per arrow."""

    quiver: Quiver
    dim: DimensionVector
    mats: Mapping[str, Matrix]
    field: Field = RATIONALS

    def __post_init__(self) -> None:
        if self.dim.vertices != self.quiver.vertices:
            raise IndexMismatch("dimension vector is not indexed by the quiver's vertices")
        missing = [a.id for a in self.quiver.arrows if a.id not in self.mats]
        if missing:
            raise ShapeMismatch(f"no matrix given for arrows {missing}")
        extra = sorted(set(self.mats) - {a.id for a in self.quiver.arrows})
        if extra:
            raise ShapeMismatch(f"matrices given for unknown arrows {extra}")
        for a in self.quiver.arrows:
            m = self.mats[a.id]
            expected = (self.dim[a.head], self.dim[a.tail])
            if m.shape != expected:
                raise ShapeMismatch(f"arrow {a.id!r} needs a {expected[0]}x{expected[1]} matrix, got {m.rows}x{m.cols}")
            if m.field != self.field:
                raise ShapeMismatch(f"arrow {a.id!r} has entries in {m.field.name}, expected {self.field.name}")

    @classmethod
    def build(
        cls,
        q: Quiver,
        dim: DimensionVector,
        mats: Mapping[str, Any],
        field: Field = RATIONALS,
    ) -> "RepPoint":
        """Build from nested lists (ints, Fractions or strings), filling empty blocks."""
        converted = {}
        for a in q.arrows:
            rows, cols = dim[a.head], dim[a.tail]
            value = mats.get(a.id)
            if isinstance(value, Matrix):
                converted[a.id] = value
            elif value is None or rows * cols == 0:
                converted[a.id] = Matrix.zeros(field, rows, cols)
            else:
                converted[a.id] = Matrix.from_rows(field, value, cols)
        extra = sorted(set(mats) - {a.id for a in q.arrows})
        if extra:
            raise ShapeMismatch(f"matrices given for unknown arrows {extra}")
        return cls(q, dim, converted, field)

    def same_values(self, other: "RepPoint") -> bool:
        return (
            self.quiver == other.quiver
            and self.dim == other.dim
            and all(self.mats[a.id] == other.mats[a.id] for a in self.quiver.arrows)
        )

    def coordinates(self) -> dict[str, Scalar]:
        """Every matrix entry keyed by its coordinate name."""
        out = {}
        for a in self.quiver.arrows:
            m = self.mats[a.id]
            for i in range(m.rows):
                for j in range(m.cols):
                    out[coordinate_name(a.id, i, j, m.rows, m.cols)] = m[i, j]
        return out

    def to_document(self) -> dict[str, Any]:
        return {
            "dim": self.dim.to_dict(),
            "field": self.field.name,
            "mats": {a.id: self.mats[a.id].to_strings() for a in self.quiver.arrows},
        }


def ambient_dimension(q: Quiver, dim: DimensionVector) -> int:
    """Number of coordinates of rep_beta(Q)."""
    return sum(dim[a.tail] * dim[a.head] for a in q.arrows)


def coordinate_names(q: Quiver, dim: DimensionVector) -> list[str]:
    return [
        coordinate_name(a.id, i, j, dim[a.head], dim[a.tail])
        for a in q.arrows
        for i in range(dim[a.head])
        for j in range(dim[a.tail])
    ]


def zero_point(q: Quiver, dim: DimensionVector, field: Field = RATIONALS) -> RepPoint:
    return RepPoint.build(q, dim, {}, field)


def random_point(
    q: Quiver,
    dim: DimensionVector,
    rng: random.Random,
    field: Field = RATIONALS,
    sample_range: tuple[int, int] = SAMPLE_RANGE,
) -> RepPoint:
    """A uniformly sampled point of rep_beta(Q) (no relations)."""
    low, high = sample_range
    mats = {
        a.id: random_matrix(field, dim[a.head], dim[a.tail], rng, low, high) for a in q.arrows
    }
    return RepPoint(q, dim, mats, field)


def direct_sum(v: RepPoint, w: RepPoint) -> RepPoint:
    """Block-diagonal sum V + W."""
    if v.quiver != w.quiver or v.field != w.field:
        raise ShapeMismatch("direct sum needs points of the same quiver over the same field")
    mats = {a.id: v.mats[a.id].block_diagonal(w.mats[a.id]) for a in v.quiver.arrows}
    return RepPoint(v.quiver, v.dim + w.dim, mats, v.field)


def path_matrix(v: RepPoint, p: Path) -> Matrix:
    """V(p) = V(a_r) ... V(a_1); the identity on V_x for a trivial path e_x."""
    p.check(v.quiver)
    if p.is_trivial():
        return Matrix.identity(v.field, v.dim[p.anchor])  # type: ignore[index]
    result = v.mats[p.arrows[0]]
    for arrow_id in p.arrows[1:]:
        result = v.mats[arrow_id] @ result
    return result


def evaluate_uniform(v: RepPoint, u: UniformElement) -> Matrix:
    """V(u) = sum of coeff * V(path) over the terms of u."""
    result: Matrix | None = None
    for t in u.terms:
        term = path_matrix(v, t.path).scale(v.field.convert(t.coeff))
        result = term if result is None else result + term
    if result is None:
        raise ShapeMismatch("cannot evaluate an empty relation")
    return result


def is_point_of(v: RepPoint, r: RelationSet) -> bool:
    """True iff V(u) = 0 for every relation u."""
    return all(evaluate_uniform(v, u).is_zero() for u in r.elements)


def random_group_element(
    dim: DimensionVector,
    rng: random.Random,
    field: Field = RATIONALS,
    sample_range: tuple[int, int] = SAMPLE_RANGE,
) -> dict[str, Matrix]:
    """An element of GL_beta: an invertible matrix per vertex."""
    low, high = sample_range
    g = {}
    for x in dim.vertices:
        while True:
            m = random_matrix(field, dim[x], dim[x], rng, low, high)
            if is_invertible(m):
                break
        g[x] = m
    return g


def act(g: Mapping[str, Matrix], v: RepPoint) -> RepPoint:
    """g.V = (g_ha V(a) g_ta^-1)."""
    inverses = {x: inverse(m) for x, m in g.items()}
    mats = {
        a.id: g[a.head] @ v.mats[a.id] @ inverses[a.tail] for a in v.quiver.arrows
    }
    return RepPoint(v.quiver, v.dim, mats, v.field)


@dataclass(frozen=True)
class HomSpace:
    """Basis of Hom(V, W): each element maps vertex x to a beta_W(x) x beta_V(x) matrix."""

    dim: int
    basis: list[dict[str, Matrix]]


def _check_compatible(v: RepPoint, w: RepPoint) -> None:
    if v.quiver != w.quiver:
        raise ShapeMismatch("points live on different quivers")
    if v.field != w.field:
        raise ShapeMismatch(f"points live over {v.field.name} and {w.field.name}")


def hom_space(v: RepPoint, w: RepPoint) -> HomSpace:
    """Solve g_ha V(a) = W(a) g_ta for all arrows a, exactly."""
    _check_compatible(v, w)
    q, fld = v.quiver, v.field
    offsets: dict[str, int] = {}
    total = 0
    for x in q.vertices:
        offsets[x] = total
        total += w.dim[x] * v.dim[x]

    def unknown(x: str, r: int, c: int) -> int:
        return offsets[x] + r * v.dim[x] + c

    equations: list[list[Scalar]] = []
    for a in q.arrows:
        va, wa = v.mats[a.id], w.mats[a.id]
        t, h = a.tail, a.head
        for i in range(w.dim[h]):
            for j in range(v.dim[t]):
                row = [fld.zero] * total
                for k in range(v.dim[h]):
                    if va[k, j]:
                        row[unknown(h, i, k)] += va[k, j]
                for k in range(w.dim[t]):
                    if wa[i, k]:
                        row[unknown(t, k, j)] -= wa[i, k]
                equations.append(row)

    result = rank_kernel(Matrix.from_entries(fld, len(equations), total, equations))
    basis = []
    for vec in result.kernel:
        element = {}
        for x in q.vertices:
            rows, cols = w.dim[x], v.dim[x]
            data = [[vec[offsets[x] + r * cols + c] for c in range(cols)] for r in range(rows)]
            element[x] = Matrix.from_entries(fld, rows, cols, data)
        basis.append(element)
    return HomSpace(len(basis), basis)


def end_dim(v: RepPoint) -> int:
    return hom_space(v, v).dim


@dataclass(frozen=True)
class BrickCheck:
    is_brick: bool
    end_dim: int


def is_brick(v: RepPoint) -> BrickCheck:
    """A brick has End(V) = K."""
    d = end_dim(v)
    return BrickCheck(d == 1, d)


def is_intertwiner(g: Mapping[str, Matrix], v: RepPoint, w: RepPoint) -> bool:
    return all(
        g[a.head] @ v.mats[a.id] == w.mats[a.id] @ g[a.tail] for a in v.quiver.arrows
    )


def _combine(basis: list[dict[str, Matrix]], coeffs: list[Scalar], vertices: tuple[str, ...]) -> dict[str, Matrix]:
    out = {}
    for x in vertices:
        acc = basis[0][x].scale(coeffs[0])
        for b, c in zip(basis[1:], coeffs[1:]):
            acc = acc + b[x].scale(c)
        out[x] = acc
    return out


@dataclass(frozen=True)
class IsomorphismResult:
    verdict: Literal["yes", "no", "inconclusive"]
    reason: str
    certificate: dict[str, Matrix] | None = None


def is_isomorphic(
    v: RepPoint,
    w: RepPoint,
    trials: int = DEFAULT_ISOMORPHISM_TRIALS,
    seed: int = 0,
    sample_range: tuple[int, int] = SAMPLE_RANGE,
) -> IsomorphismResult:
    """
    Decide V ~ W by Hom dimensions and random invertible intertwiners.

    "no" is a proof (dimension data differ); "yes" comes with an exactly
    verified invertible intertwiner; otherwise the answer is "inconclusive".
    """
    _check_compatible(v, w)
    if v.dim != w.dim:
        return IsomorphismResult("no", f"dimension vectors differ: {v.dim} vs {w.dim}")
    q = v.quiver
    if v.same_values(w):
        identity = {x: Matrix.identity(v.field, v.dim[x]) for x in q.vertices}
        return IsomorphismResult("yes", "identical points", identity)

    hom_vw = hom_space(v, w)
    dims = {
        "Hom(V,W)": hom_vw.dim,
        "Hom(W,V)": hom_space(w, v).dim,
        "End(V)": end_dim(v),
        "End(W)": end_dim(w),
    }
    if len(set(dims.values())) > 1:
        shown = ", ".join(f"{k}={d}" for k, d in dims.items())
        return IsomorphismResult("no", f"hom dimensions differ: {shown}")

    rng = random.Random(seed)
    low, high = sample_range
    for trial in range(trials):
        coeffs = [v.field.random_element(rng, low, high) for _ in hom_vw.basis]
        g = _combine(hom_vw.basis, coeffs, q.vertices)
        if all(is_invertible(g[x]) for x in q.vertices) and is_intertwiner(g, v, w):
            return IsomorphismResult("yes", f"invertible intertwiner found in trial {trial + 1}", g)
    return IsomorphismResult(
        "inconclusive", f"no invertible element among {trials} random Hom combinations"
    )


def orbit_dimension(v: RepPoint) -> int:
    """dim GL_beta - dim End(V); valid with or without relations."""
    return v.dim.gl_dimension() - end_dim(v)


@dataclass(frozen=True)
class OrbitData:
    gl_dim: int
    end_dim: int
    orbit_dim: int
    codim: int


def require_acyclic(q: Quiver) -> None:
    if not q.is_acyclic():
        raise CyclicQuiver("this analysis needs an acyclic quiver without relations")


def orbit_codim_hereditary(v: RepPoint) -> OrbitData:
    """Codimension of the orbit of V in rep_beta(Q), i.e. dim Ext^1(V,V)."""
    require_acyclic(v.quiver)
    e = end_dim(v)
    gl = v.dim.gl_dimension()
    return OrbitData(gl, e, gl - e, e - euler_form(v.quiver, v.dim, v.dim))


@dataclass(frozen=True)
class HomExt:
    hom: int
    ext: int


def generic_hom_ext(
    q: Quiver,
    a: DimensionVector,
    b: DimensionVector,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    field: Field = RATIONALS,
) -> HomExt:
    """Generic dim Hom and dim Ext^1 between representations of dimension a and b."""
    require_acyclic(q)
    require_samples(samples)
    dims = []
    for i in range(samples):
        rng = random.Random(derive_seed(seed, i))
        v = random_point(q, a, rng, field)
        w = random_point(q, b, rng, field)
        dims.append(hom_space(v, w).dim)
    hom = min(dims)
    return HomExt(hom, hom - euler_form(q, a, b))


def generic_end_dim(
    q: Quiver,
    b: DimensionVector,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    field: Field = RATIONALS,
) -> int:
    require_samples(samples)
    return min(
        end_dim(random_point(q, b, random.Random(derive_seed(seed, i)), field))
        for i in range(samples)
    )


def generic_self_ext(
    q: Quiver,
    b: DimensionVector,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    field: Field = RATIONALS,
) -> int:
    """Codimension of a generic orbit: generic dim End - <b,b>."""
    require_acyclic(q)
    return generic_end_dim(q, b, samples, seed, field) - euler_form(q, b, b)


@dataclass(frozen=True)
class Splitting:
    """Dimension vectors of a direct-sum decomposition found by Fitting splits."""

    parts: list[DimensionVector]
    galois_splits: int = 0
    caveat: str = SPLITTING_CAVEAT
    notes: list[str] = field(default_factory=list)


def _block_charpoly(phi: Mapping[str, Matrix], v: RepPoint, t: Symbol) -> Poly:
    fld = v.field
    result = Poly(1, t, domain=fld.domain)
    for x in v.quiver.vertices:
        if v.dim[x] == 0:
            continue
        coeffs = [fld.to_rational(c) for c in characteristic_polynomial(phi[x])]
        result = result * Poly(coeffs, t, domain=fld.domain)
    return result


def _fitting_split(
    v: RepPoint, psi: Mapping[str, Matrix]
) -> tuple[RepPoint, RepPoint]:
    """Split V along ker(psi^N) + im(psi^N) at every vertex."""
    q, fld = v.quiver, v.field
    bases: dict[str, Matrix] = {}
    kernel_dims: dict[str, int] = {}
    for x in q.vertices:
        n = v.dim[x]
        if n == 0:
            bases[x] = Matrix.zeros(fld, 0, 0)
            kernel_dims[x] = 0
            continue
        power = matrix_power(psi[x], n)
        kernel = rank_kernel(power).kernel
        image = column_space(power)
        bases[x] = Matrix.from_columns(fld, kernel + image, n)
        kernel_dims[x] = len(kernel)
    inverses = {x: inverse(m) for x, m in bases.items()}

    kernel_mats, image_mats = {}, {}
    for a in q.arrows:
        moved = inverses[a.head] @ v.mats[a.id] @ bases[a.tail]
        kh, kt = kernel_dims[a.head], kernel_dims[a.tail]
        kernel_mats[a.id] = moved.block(0, kh, 0, kt)
        image_mats[a.id] = moved.block(kh, moved.rows, kt, moved.cols)
    kdim = DimensionVector(q.vertices, tuple(kernel_dims[x] for x in q.vertices))
    idim = DimensionVector(q.vertices, tuple(v.dim[x] - kernel_dims[x] for x in q.vertices))
    return RepPoint(q, kdim, kernel_mats, fld), RepPoint(q, idim, image_mats, fld)


def _split(
    v: RepPoint,
    rng: random.Random,
    trials: int,
    sample_range: tuple[int, int],
    notes: list[str],
) -> tuple[list[DimensionVector], int]:
    if v.dim.is_zero():
        return [], 0
    end = hom_space(v, v)
    if end.dim == 1:
        return [v.dim], 0
    t = Symbol("t")
    low, high = sample_range
    degree = 1
    for _ in range(trials):
        coeffs = [v.field.random_element(rng, low, high) for _ in end.basis]
        phi = _combine(end.basis, coeffs, v.quiver.vertices)
        _, factors = _block_charpoly(phi, v, t).factor_list()
        if len(factors) >= 2:
            f, mult = factors[0]
            f_coeffs = [v.field.convert(c) for c in (f**mult).all_coeffs()]
            psi = {x: polynomial_at(f_coeffs, phi[x]) for x in v.quiver.vertices}
            left, right = _fitting_split(v, psi)
            logger.debug(f"Fitting split {v.dim} -> {left.dim} + {right.dim}")
            left_parts, g1 = _split(left, rng, trials, sample_range, notes)
            right_parts, g2 = _split(right, rng, trials, sample_range, notes)
            return left_parts + right_parts, g1 + g2
        degree = max(degree, factors[0][0].degree())
    if degree > 1:
        piece = v.dim.divide(degree)
        if piece is not None:
            message = (
                f"summand {v.dim} is indecomposable over {v.field.name} but splits into "
                f"{degree} Galois-conjugate summands {piece} over the algebraic closure"
            )
            logger.info(message)
            notes.append(message)
            return [piece] * degree, 1
        notes.append(f"summand {v.dim}: residue degree {degree} does not divide the dimension vector")
    return [v.dim], 0


def split_indecomposables(
    v: RepPoint,
    trials: int = DEFAULT_FITTING_TRIALS,
    seed: int = 0,
    sample_range: tuple[int, int] = SAMPLE_RANGE,
) -> Splitting:
    """Decompose V by repeated Fitting splitting with random endomorphisms."""
    notes: list[str] = []
    parts, galois = _split(v, random.Random(seed), trials, sample_range, notes)
    parts.sort(key=lambda d: d.entries, reverse=True)
    return Splitting(parts, galois, notes=notes)
