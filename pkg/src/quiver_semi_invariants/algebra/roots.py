"""
Schur roots, canonical decompositions and (almost-)prehomogeneity.

Everything here samples generic representations of an acyclic quiver without
relations; the canonical decomposition is certified by checking that every
part is a Schur root and that generic ext vanishes between distinct parts.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from quiver_semi_invariants.algebra.linalg import RATIONALS, Field
from quiver_semi_invariants.algebra.quiver import (
    DimensionVector,
    Quiver,
    euler_form,
    require_nonzero,
)
from quiver_semi_invariants.algebra.representations import (
    DEFAULT_FITTING_TRIALS,
    DEFAULT_SAMPLES,
    derive_seed,
    end_dim,
    generic_end_dim,
    generic_hom_ext,
    random_point,
    require_acyclic,
    require_samples,
    split_indecomposables,
)
from quiver_semi_invariants.errors import CertificationFailed
from quiver_semi_invariants.settings import get_settings

logger = logging.getLogger(__name__)

CERTIFICATION_RETRIES = get_settings().canonical.certification_retries

# seeds of retry r are derived from indices r * RETRY_STRIDE + i
RETRY_STRIDE = 1000


class RootClass(str, Enum):
    REAL = "Real"
    ISOTROPIC = "Isotropic"
    IMAGINARY = "Imaginary"
    NOT_SCHUR = "NotSchur"

    def describe(self) -> str:
        if self is RootClass.NOT_SCHUR:
            return "Not a Schur root"
        return f"{self.value} Schur root"


class Conclusion(str, Enum):
    POLYNOMIAL_RING = "PolynomialRing"
    COMPLETE_INTERSECTION = "CompleteIntersection"
    UNKNOWN = "Unknown"


def class_by_euler(value: int) -> RootClass:
    """Real / Isotropic / Imaginary for a Schur root with <b,b> = value."""
    if value == 1:
        return RootClass.REAL
    if value == 0:
        return RootClass.ISOTROPIC
    return RootClass.IMAGINARY


def classify_root(
    q: Quiver,
    b: DimensionVector,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    field: Field = RATIONALS,
) -> RootClass:
    """Schur iff a generic representation of dimension b is a brick; then by sign of <b,b>."""
    require_acyclic(q)
    require_nonzero(b)
    if generic_end_dim(q, b, samples, seed, field) != 1:
        return RootClass.NOT_SCHUR
    return class_by_euler(euler_form(q, b, b))


@dataclass(frozen=True)
class ExtEntry:
    i: int
    j: int
    ext: int


@dataclass(frozen=True)
class CanonicalCertificate:
    passed: bool
    reason: str
    schur: list[bool] = field(default_factory=list)
    ext: list[ExtEntry] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "reason": self.reason,
            "schur": self.schur,
            "ext": [{"i": e.i, "j": e.j, "ext": e.ext} for e in self.ext],
        }


def verify_canonical(
    q: Quiver,
    parts: list[DimensionVector],
    b: DimensionVector,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    field: Field = RATIONALS,
) -> CanonicalCertificate:
    """Pass iff parts sum to b, each part is Schur, and ext vanishes between distinct indices."""
    require_acyclic(q)
    total = DimensionVector.zero(q.vertices)
    for p in parts:
        total = total + p
    if total != b:
        return CanonicalCertificate(False, f"parts sum to {total}, not {b}")

    schur_cache: dict[tuple[int, ...], bool] = {}
    for p in parts:
        if p.entries not in schur_cache:
            schur_cache[p.entries] = (
                not p.is_zero()
                and classify_root(q, p, seed, samples, field) is not RootClass.NOT_SCHUR
            )
    schur = [schur_cache[p.entries] for p in parts]
    if not all(schur):
        bad = ", ".join(str(p) for p, ok in zip(parts, schur) if not ok)
        return CanonicalCertificate(False, f"not Schur roots: {bad}", schur)

    entries: list[ExtEntry] = []
    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    for i, pi in enumerate(parts):
        for j, pj in enumerate(parts):
            if i == j:
                continue
            key = (pi.entries, pj.entries)
            if key not in cache:
                cache[key] = generic_hom_ext(q, pi, pj, samples, seed, field).ext
            entries.append(ExtEntry(i, j, cache[key]))
    nonzero = [e for e in entries if e.ext != 0]
    if nonzero:
        e = nonzero[0]
        return CanonicalCertificate(
            False, f"ext({parts[e.i]},{parts[e.j]}) = {e.ext}", schur, entries
        )
    return CanonicalCertificate(True, "all parts Schur, pairwise ext 0", schur, entries)


@dataclass(frozen=True)
class CanonicalDecomposition:
    parts: list[DimensionVector]
    certificate: CanonicalCertificate
    confident: bool
    attempts: int
    caveat: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "parts": [p.to_list() for p in self.parts],
            "certificate": self.certificate.to_dict(),
            "confident": self.confident,
            "attempts": self.attempts,
            "caveat": self.caveat,
            "notes": self.notes,
        }


def _sample_parts(
    q: Quiver,
    b: DimensionVector,
    seed: int,
    attempt: int,
    samples: int,
    field: Field,
    trials: int,
    notes: list[str],
) -> list[DimensionVector]:
    """Majority multiset of split parts over `samples` generic points."""
    outcomes: Counter[tuple[tuple[int, ...], ...]] = Counter()
    end_dims: dict[tuple[tuple[int, ...], ...], int] = {}
    for i in range(samples):
        s = derive_seed(seed, attempt * RETRY_STRIDE + i)
        v = random_point(q, b, random.Random(s), field)
        splitting = split_indecomposables(v, trials, s)
        key = tuple(p.entries for p in splitting.parts)
        outcomes[key] += 1
        d = end_dim(v)
        end_dims[key] = min(d, end_dims.get(key, d))
        for note in splitting.notes:
            if note not in notes:
                notes.append(note)
    best = max(outcomes, key=lambda k: (outcomes[k], -end_dims[k], k))
    if len(outcomes) > 1:
        logger.info(f"Sampled decompositions of {b} disagree: {dict(outcomes)}; keeping {best}")
    return [DimensionVector(q.vertices, p) for p in best]


def canonical_decomposition(
    q: Quiver,
    b: DimensionVector,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    field: Field = RATIONALS,
    retries: int = CERTIFICATION_RETRIES,
    require_certified: bool = False,
    trials: int = DEFAULT_FITTING_TRIALS,
) -> CanonicalDecomposition:
    """
    Canonical decomposition of b by generic sampling and Fitting splitting.

    The majority outcome is certified with verify_canonical; a failed
    certificate triggers a resample with fresh derived seeds, up to `retries`
    times. After that the result is returned with confident=False, or
    CertificationFailed is raised when `require_certified` is set.
    """
    require_acyclic(q)
    require_samples(samples)
    notes: list[str] = []
    if b.is_zero():
        cert = CanonicalCertificate(True, "zero dimension vector")
        return CanonicalDecomposition([], cert, True, 0, "", notes)

    attempts = retries + 1
    parts: list[DimensionVector] = []
    cert = CanonicalCertificate(False, "not attempted")
    for attempt in range(attempts):
        parts = _sample_parts(q, b, seed, attempt, samples, field, trials, notes)
        cert = verify_canonical(q, parts, b, derive_seed(seed, attempt), samples, field)
        if cert.passed:
            caveat = "" if attempt == 0 and not notes else "sampled; see notes"
            return CanonicalDecomposition(parts, cert, True, attempt + 1, caveat, notes)
        logger.warning(
            f"Certification of {b} failed (attempt {attempt + 1}/{attempts}): {cert.reason}"
        )

    if require_certified:
        raise CertificationFailed(
            f"canonical decomposition of {b} not certified after {attempts} attempts: {cert.reason}"
        )
    logger.warning(f"Returning uncertified decomposition of {b}")
    return CanonicalDecomposition(parts, cert, False, attempts, "certification failed", notes)


@dataclass(frozen=True)
class PrehomogeneityReport:
    prehomogeneous: bool
    almost_prehomogeneous: bool
    isotropic_part: DimensionVector | None
    conclusion: Conclusion
    parts: list[DimensionVector]
    classes: list[RootClass]
    confident: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "prehomogeneous": self.prehomogeneous,
            "almost_prehomogeneous": self.almost_prehomogeneous,
            "isotropic_part": self.isotropic_part.to_list() if self.isotropic_part else None,
            "conclusion": self.conclusion.value,
            "parts": [p.to_list() for p in self.parts],
            "classes": [c.value for c in self.classes],
            "confident": self.confident,
        }


def report_from_decomposition(q: Quiver, decomposition: CanonicalDecomposition) -> PrehomogeneityReport:
    """Read prehomogeneity off a certified canonical decomposition."""
    parts = decomposition.parts
    classes = [class_by_euler(euler_form(q, p, p)) for p in parts]
    counts = Counter(classes)
    prehom = counts[RootClass.REAL] == len(parts)
    almost = counts[RootClass.ISOTROPIC] == 1 and counts[RootClass.REAL] == len(parts) - 1
    isotropic = next((p for p, c in zip(parts, classes) if c is RootClass.ISOTROPIC), None)
    if prehom:
        conclusion = Conclusion.POLYNOMIAL_RING
    elif almost:
        conclusion = Conclusion.COMPLETE_INTERSECTION
    else:
        conclusion = Conclusion.UNKNOWN
    return PrehomogeneityReport(
        prehomogeneous=prehom,
        almost_prehomogeneous=almost,
        isotropic_part=isotropic if almost else None,
        conclusion=conclusion,
        parts=parts,
        classes=classes,
        confident=decomposition.confident,
    )


def prehomogeneity_report(
    q: Quiver,
    b: DimensionVector,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    field: Field = RATIONALS,
    require_certified: bool = False,
) -> PrehomogeneityReport:
    """Prehomogeneous iff every part is real; almost iff exactly one part is isotropic."""
    decomposition = canonical_decomposition(
        q, b, seed, samples, field, require_certified=require_certified
    )
    return report_from_decomposition(q, decomposition)
