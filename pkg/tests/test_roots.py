"""Tests for Schur roots, canonical decompositions and prehomogeneity."""

from unittest.mock import patch

import pytest

from quiver_semi_invariants.algebra.quiver import Quiver, dimension_vector
from quiver_semi_invariants.algebra.roots import (
    CanonicalCertificate,
    Conclusion,
    RootClass,
    canonical_decomposition,
    class_by_euler,
    classify_root,
    prehomogeneity_report,
    verify_canonical,
)
from quiver_semi_invariants.errors import CertificationFailed, CyclicQuiver, ZeroVector


def entries(parts) -> list[tuple[int, ...]]:
    return [p.entries for p in parts]


class TestClassification:
    """Tests for classify_root."""

    def test_class_by_euler(self):
        """Sign of <b,b> picks the class of a Schur root."""
        assert class_by_euler(1) is RootClass.REAL
        assert class_by_euler(0) is RootClass.ISOTROPIC
        assert class_by_euler(-3) is RootClass.IMAGINARY

    def test_kronecker_isotropic(self, kronecker):
        """(1,1) on the Kronecker quiver is an isotropic Schur root."""
        result = classify_root(kronecker, dimension_vector(kronecker, "1,1"), seed=7)
        assert result is RootClass.ISOTROPIC
        assert result.describe() == "Isotropic Schur root"

    def test_a2_real(self, a2):
        """(1,1) on A2 is a real Schur root."""
        assert classify_root(a2, dimension_vector(a2, "1,1")) is RootClass.REAL

    def test_kronecker_preprojective(self, kronecker):
        """(2,1) is a real Schur root."""
        assert classify_root(kronecker, dimension_vector(kronecker, "2,1")) is RootClass.REAL

    def test_not_schur(self, kronecker):
        """(2,2) is a sum of two isotropic roots."""
        result = classify_root(kronecker, dimension_vector(kronecker, "2,2"))
        assert result is RootClass.NOT_SCHUR
        assert result.describe() == "Not a Schur root"

    def test_d4_null_root(self, d4_subspace):
        """The null root of D~4 is isotropic."""
        b = dimension_vector(d4_subspace, "1,1,1,1,2")
        assert classify_root(d4_subspace, b, seed=3) is RootClass.ISOTROPIC

    @pytest.mark.parametrize(
        ("quiver", "dims"),
        [("kronecker", "1,1"), ("kronecker", "2,1"), ("kronecker", "2,2"), ("a3", "1,1,1"), ("d4_subspace", "1,1,1,1,2")],
    )
    def test_relabelling_vertices(self, request, quiver, dims):
        """Reversing the vertex order does not change the class."""
        q = request.getfixturevalue(quiver)
        b = dimension_vector(q, dims)
        relabelled = Quiver(vertices=tuple(reversed(q.vertices)), arrows=q.arrows)
        moved = dimension_vector(relabelled, b.to_dict())
        assert classify_root(relabelled, moved, seed=2) is classify_root(q, b, seed=2)

    def test_cyclic_rejected(self, jordan):
        """Loops are outside the hereditary setting."""
        with pytest.raises(CyclicQuiver):
            classify_root(jordan, dimension_vector(jordan, "1"))

    def test_zero_rejected(self, a2):
        """The zero vector is not a root."""
        with pytest.raises(ZeroVector):
            classify_root(a2, dimension_vector(a2, "0,0"))


class TestVerifyCanonical:
    """Tests for verify_canonical."""

    def test_wrong_sum(self, a2):
        """Parts must add up to b."""
        b = dimension_vector(a2, "1,1")
        cert = verify_canonical(a2, [dimension_vector(a2, "1,0")], b)
        assert not cert.passed
        assert "sum" in cert.reason

    def test_non_schur_part(self, kronecker):
        """(2,2) is not an admissible part."""
        b = dimension_vector(kronecker, "2,2")
        cert = verify_canonical(kronecker, [b], b)
        assert not cert.passed
        assert cert.schur == [False]

    def test_nonvanishing_ext(self, a2):
        """S1 + S2 is not the canonical decomposition of (1,1)."""
        b = dimension_vector(a2, "1,1")
        parts = [dimension_vector(a2, "1,0"), dimension_vector(a2, "0,1")]
        cert = verify_canonical(a2, parts, b)
        assert not cert.passed
        assert cert.schur == [True, True]
        assert {(e.i, e.j, e.ext) for e in cert.ext} == {(0, 1, 1), (1, 0, 0)}

    def test_repeated_parts_are_checked(self, kronecker):
        """Two copies of (1,1) have vanishing generic ext between them."""
        b = dimension_vector(kronecker, "2,2")
        one = dimension_vector(kronecker, "1,1")
        cert = verify_canonical(kronecker, [one, one], b)
        assert cert.passed
        assert [(e.i, e.j) for e in cert.ext] == [(0, 1), (1, 0)]


class TestCanonicalDecomposition:
    """Tests for canonical_decomposition."""

    def test_schur_root_is_its_own_decomposition(self, kronecker):
        """(1,1) stays whole."""
        result = canonical_decomposition(kronecker, dimension_vector(kronecker, "1,1"))
        assert entries(result.parts) == [(1, 1)]
        assert result.confident
        assert result.certificate.passed

    def test_kronecker_two_two(self, kronecker):
        """(2,2) = (1,1) + (1,1)."""
        result = canonical_decomposition(kronecker, dimension_vector(kronecker, "2,2"), seed=1)
        assert entries(result.parts) == [(1, 1), (1, 1)]
        assert result.confident

    def test_kronecker_three_one(self, kronecker):
        """(3,1) = (2,1) + (1,0)."""
        result = canonical_decomposition(kronecker, dimension_vector(kronecker, "3,1"), seed=2)
        assert entries(result.parts) == [(2, 1), (1, 0)]

    def test_disconnected_support(self, a3):
        """(1,0,1) on A3 splits into the two simples."""
        result = canonical_decomposition(a3, dimension_vector(a3, "1,0,1"))
        assert entries(result.parts) == [(1, 0, 0), (0, 0, 1)]

    def test_zero_vector(self, a2):
        """The zero vector has the empty decomposition."""
        result = canonical_decomposition(a2, dimension_vector(a2, "0,0"))
        assert result.parts == []
        assert result.confident

    def test_determinism(self, kronecker):
        """The same seed gives the same answer."""
        b = dimension_vector(kronecker, "2,3")
        first = canonical_decomposition(kronecker, b, seed=9).to_dict()
        second = canonical_decomposition(kronecker, b, seed=9).to_dict()
        assert first == second

    def test_exhausted_retries_lower_confidence(self, a2):
        """A certificate that never passes yields confident=False after all retries."""
        failing = CanonicalCertificate(False, "forced failure")
        with patch("quiver_semi_invariants.algebra.roots.verify_canonical", return_value=failing):
            result = canonical_decomposition(a2, dimension_vector(a2, "1,1"), retries=2)
        assert not result.confident
        assert result.attempts == 3
        assert result.caveat == "certification failed"

    def test_require_certified_raises(self, a2):
        """With require_certified the failure becomes CertificationFailed."""
        failing = CanonicalCertificate(False, "forced failure")
        with patch("quiver_semi_invariants.algebra.roots.verify_canonical", return_value=failing):
            with pytest.raises(CertificationFailed, match="forced failure"):
                canonical_decomposition(
                    a2, dimension_vector(a2, "1,1"), retries=1, require_certified=True
                )


class TestPrehomogeneity:
    """Tests for prehomogeneity_report."""

    def test_a2_prehomogeneous(self, a2):
        """Real Schur roots give a polynomial SI ring."""
        report = prehomogeneity_report(a2, dimension_vector(a2, "1,1"))
        assert report.prehomogeneous
        assert not report.almost_prehomogeneous
        assert report.conclusion is Conclusion.POLYNOMIAL_RING

    def test_kronecker_almost_prehomogeneous(self, kronecker):
        """One isotropic part gives a complete intersection."""
        report = prehomogeneity_report(kronecker, dimension_vector(kronecker, "1,1"))
        assert report.almost_prehomogeneous
        assert report.isotropic_part.entries == (1, 1)
        assert report.conclusion is Conclusion.COMPLETE_INTERSECTION

    def test_two_isotropic_parts(self, kronecker):
        """Two isotropic parts give no conclusion."""
        report = prehomogeneity_report(kronecker, dimension_vector(kronecker, "2,2"), seed=1)
        assert not report.prehomogeneous
        assert not report.almost_prehomogeneous
        assert report.conclusion is Conclusion.UNKNOWN

    def test_d4_almost_prehomogeneous(self, d4_subspace):
        """The D~4 null root is almost prehomogeneous."""
        report = prehomogeneity_report(d4_subspace, dimension_vector(d4_subspace, "1,1,1,1,2"))
        assert report.almost_prehomogeneous
        assert report.to_dict()["conclusion"] == "CompleteIntersection"
