"""
Tests for the small dense linear-algebra kernel.

numpy.linalg serves as the independent reference; the kernel itself never
calls its eigen or SVD routines.
"""

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bincorr.errors import NonFinite, NotHermitian, ZeroVector
from bincorr.linalg import (
    as_vec3,
    det3,
    gram_determinant,
    hermitian_eigenvalues,
    hermitian_eigh,
    numeric_rank,
    orthogonal_complement_basis,
    symmetric3_singular_values,
)
from bincorr.rng import make_rng
from tests.conftest import CHEN_C, SINGLET_RHO

entries = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------


class TestHermitianEigenvalues:
    """hermitian_eigenvalues: fixed examples and error cases."""

    def test_identity(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4)), [1, 1, 1, 1], atol=1e-12)

    def test_singlet_is_rank_one_projector(self):
        np.testing.assert_allclose(hermitian_eigenvalues(SINGLET_RHO), [0, 0, 0, 1], atol=1e-10)

    def test_partial_transpose_of_singlet_projector(self):
        # Werner at xi = 1, transposed over B
        pt = 0.5 * np.array(
            [[0, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0]], dtype=complex
        )
        np.testing.assert_allclose(hermitian_eigenvalues(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-10)

    def test_ascending_and_sum_to_trace(self):
        h = np.array(
            [[2, 1j, 0, 0], [-1j, 3, 0.5, 0], [0, 0.5, -1, 2 - 1j], [0, 0, 2 + 1j, 0]],
            dtype=complex,
        )
        w = hermitian_eigenvalues(h)
        assert np.all(np.diff(w) >= 0)
        assert abs(w.sum() - np.trace(h).real) < 1e-9

    def test_non_hermitian_rejected(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 1] = 1.0
        with pytest.raises(NotHermitian):
            hermitian_eigenvalues(m)

    def test_non_finite_rejected(self):
        m = np.eye(4)
        m[2, 2] = np.nan
        with pytest.raises(NonFinite):
            hermitian_eigenvalues(m)


@seed(1)
@settings(max_examples=200, deadline=None)
@given(
    re=arrays(np.float64, (4, 4), elements=entries),
    im=arrays(np.float64, (4, 4), elements=entries),
)
def test_eigh_reconstructs_random_hermitian(re, im):
    z = re + 1j * im
    h = 0.5 * (z + z.conj().T)
    w, v = hermitian_eigh(h)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-8)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-8)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-10)


# ---------------------------------------------------------------------------
# Singular values, rank, determinant
# ---------------------------------------------------------------------------


class TestSingularValues:
    def test_zero_matrix(self):
        np.testing.assert_allclose(symmetric3_singular_values(np.zeros((3, 3))), [0, 0, 0])

    def test_minus_identity(self):
        np.testing.assert_allclose(symmetric3_singular_values(-np.eye(3)), [1, 1, 1], atol=1e-12)

    def test_chen_correlation_matrix(self):
        sv = symmetric3_singular_values(CHEN_C)
        np.testing.assert_allclose(sv, [2 / 3, 2 / 3, 4 / 9], atol=1e-10)
        assert abs(np.prod(sv) - 16 / 81) < 1e-10

    def test_descending(self):
        sv = symmetric3_singular_values(np.diag([0.1, 3.0, -2.0]))
        np.testing.assert_allclose(sv, [3.0, 2.0, 0.1], atol=1e-12)

    def test_near_singular_matches_reference(self):
        """Smallest value in [1e-9, 1e-6] is resolved at absolute precision."""
        rng = make_rng(11)
        for _ in range(200):
            u, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            w, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            small = 10.0 ** rng.uniform(-9, -6)
            m = u @ np.diag([1.0, 0.5, small]) @ w.T
            sv = symmetric3_singular_values(m)
            np.testing.assert_allclose(sv, np.linalg.svd(m, compute_uv=False), atol=1e-10)
            assert abs(sv[2] - small) < 1e-10


@seed(2)
@settings(max_examples=200, deadline=None)
@given(m=arrays(np.float64, (3, 3), elements=entries))
def test_singular_values_match_reference_and_transpose(m):
    sv = symmetric3_singular_values(m)
    np.testing.assert_allclose(sv, np.linalg.svd(m, compute_uv=False), atol=1e-10)
    np.testing.assert_allclose(sv, symmetric3_singular_values(m.T), atol=1e-10)


@seed(3)
@settings(max_examples=200, deadline=None)
@given(m=arrays(np.float64, (3, 3), elements=entries))
def test_det3_matches_reference_and_singular_values(m):
    assert abs(det3(m) - np.linalg.det(m)) < 1e-12
    assert abs(abs(det3(m)) - np.prod(np.linalg.svd(m, compute_uv=False))) < 1e-9


class TestNumericRank:
    def test_zero(self):
        assert numeric_rank(np.zeros((3, 3)), 1e-8) == 0

    def test_random_unit_outer_products_have_rank_one(self):
        rng = make_rng(12)
        for _ in range(2000):
            u, w = rng.standard_normal((2, 3))
            m = np.outer(u / np.linalg.norm(u), w / np.linalg.norm(w))
            assert numeric_rank(m, 1e-8) == 1

    def test_minus_identity(self):
        assert numeric_rank(-np.eye(3), 1e-8) == 3

    def test_outer_product(self):
        assert numeric_rank(np.outer([1.0, 2.0, -1.0], [0.5, 0.0, 3.0]), 1e-8) == 1

    @pytest.mark.parametrize("tol", [0.0, -1e-8])
    def test_non_positive_tolerance_rejected(self, tol):
        with pytest.raises(ValueError):
            numeric_rank(np.eye(3), tol)

    def test_monotone_in_tolerance(self):
        m = np.diag([1.0, 1e-5, 1e-11])
        ranks = [numeric_rank(m, t) for t in (1e-12, 1e-8, 1e-3, 2.0)]
        assert ranks == [3, 2, 1, 0]


class TestDet3:
    def test_minus_identity(self):
        assert det3(-np.eye(3)) == -1.0

    def test_identity(self):
        assert det3(np.eye(3)) == 1.0

    def test_chen(self):
        assert abs(det3(CHEN_C) + 16 / 81) < 1e-12


# ---------------------------------------------------------------------------
# Orthogonal complement
# ---------------------------------------------------------------------------


class TestOrthogonalComplement:
    @pytest.mark.parametrize(
        "v",
        [
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0],
            list(np.ones(3) / np.sqrt(3)),
            [0.3, -2.0, 1e-7],
        ],
    )
    def test_orthonormal_and_perpendicular(self, v):
        u1, u2 = orthogonal_complement_basis(v)
        assert abs(np.linalg.norm(u1) - 1) < 1e-12
        assert abs(np.linalg.norm(u2) - 1) < 1e-12
        assert abs(u1 @ u2) < 1e-12
        assert abs(u1 @ np.asarray(v)) < 1e-12
        assert abs(u2 @ np.asarray(v)) < 1e-12

    def test_z_axis_spans_xy_plane(self):
        u1, u2 = orthogonal_complement_basis([0, 0, 1])
        assert u1[2] == 0.0 and u2[2] == 0.0

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            orthogonal_complement_basis([0, 0, 0])


class TestHelpers:
    def test_gram_determinant(self):
        assert abs(gram_determinant(np.eye(3)) - 1.0) < 1e-15
        assert abs(gram_determinant([[1, 0, 0], [0, 1, 0], [1, 1, 0]])) < 1e-15

    def test_as_vec3_read_only(self):
        v = as_vec3([1, 2, 3])
        with pytest.raises(ValueError):
            v[0] = 5.0

    def test_as_vec3_shape(self):
        with pytest.raises(ValueError):
            as_vec3([1, 2])
