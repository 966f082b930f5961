"""Tests for state validation, Bloch decomposition and local operators."""

import numpy as np
import pytest

from bincorr.errors import BlochOutOfBall, InvalidState, NotNormalized, NotPositive
from bincorr.linalg import hermitian_eigenvalues
from bincorr.qstate import (
    IDENTITY2,
    SIGMA_Z,
    BlochForm,
    DensityMatrix,
    PureState,
    QubitOperator,
    bloch_assemble,
    bloch_decompose,
    density_from_pure,
    expectation,
    is_pure,
    joint_operator,
    observable_from_bloch,
    partial_trace_A,
    partial_trace_B,
    partial_transpose_B,
    purity,
    to_density,
)
from bincorr.states import werner
from tests.conftest import CHEN_A, CHEN_B, CHEN_F, SINGLET_RHO


class TestValidation:
    """Construction is the single choke point for state invariants."""

    def test_unnormalized_amplitudes_rejected(self):
        with pytest.raises(NotNormalized):
            PureState(np.array([1, 1, 0, 0], dtype=complex))

    def test_from_unnormalized(self):
        psi = PureState.from_unnormalized([1, 1, 0, 0])
        np.testing.assert_allclose(np.abs(psi.amplitudes) ** 2, [0.5, 0.5, 0, 0])

    def test_amplitudes_read_only(self, product_psi):
        with pytest.raises(ValueError):
            product_psi.amplitudes[0] = 0

    def test_non_hermitian_density(self):
        rho = np.diag([0.5, 0.5, 0, 0]).astype(complex)
        rho[0, 1] = 0.1
        with pytest.raises(InvalidState) as e:
            DensityMatrix(rho)
        assert e.value.invariant == "hermitian"

    def test_wrong_trace(self):
        with pytest.raises(InvalidState) as e:
            DensityMatrix(np.eye(4) / 2)
        assert e.value.invariant == "trace"

    def test_negative_eigenvalue(self):
        with pytest.raises(NotPositive) as e:
            DensityMatrix(np.diag([1.5, -0.5, 0, 0]))
        assert e.value.invariant == "positive_semidefinite"

    def test_bloch_bounds(self):
        with pytest.raises(InvalidState):
            BlochForm([0, 0, 1.1], [0, 0, 0], np.zeros((3, 3)))
        with pytest.raises(InvalidState):
            BlochForm([0, 0, 0], [0, 0, 0], np.diag([1.2, 0, 0]))


class TestDensityFromPure:
    def test_product_basis_state(self, product_psi):
        np.testing.assert_allclose(density_from_pure(product_psi).rho, np.diag([1, 0, 0, 0]))

    def test_singlet(self, singlet_rho):
        np.testing.assert_allclose(singlet_rho.rho, SINGLET_RHO, atol=1e-15)

    def test_chen(self, chen_rho):
        expected = np.zeros((4, 4))
        for i in (0, 1, 3):
            for j in (0, 1, 3):
                expected[i, j] = 1 / 3
        np.testing.assert_allclose(chen_rho.rho, expected, atol=1e-15)

    def test_is_pure(self, singlet_rho, maximally_mixed):
        assert is_pure(singlet_rho)
        assert not is_pure(maximally_mixed)
        assert abs(purity(maximally_mixed) - 0.25) < 1e-15

    def test_to_density_passes_mixed_through(self, maximally_mixed, product_psi):
        assert to_density(maximally_mixed) is maximally_mixed
        np.testing.assert_allclose(to_density(product_psi).rho, np.diag([1, 0, 0, 0]))


class TestBlochDecompose:
    def test_singlet(self, singlet_rho):
        bf = bloch_decompose(singlet_rho)
        np.testing.assert_allclose(bf.a, 0, atol=1e-12)
        np.testing.assert_allclose(bf.b, 0, atol=1e-12)
        np.testing.assert_allclose(bf.f, -np.eye(3), atol=1e-12)

    def test_chen(self, chen_rho):
        bf = bloch_decompose(chen_rho)
        np.testing.assert_allclose(bf.a, CHEN_A, atol=1e-12)
        np.testing.assert_allclose(bf.b, CHEN_B, atol=1e-12)
        np.testing.assert_allclose(bf.f, CHEN_F, atol=1e-12)

    @pytest.mark.parametrize("xi", [0.0, 0.3, 1.0])
    def test_werner(self, xi):
        bf = bloch_decompose(werner(xi))
        np.testing.assert_allclose(bf.a, 0, atol=1e-12)
        np.testing.assert_allclose(bf.b, 0, atol=1e-12)
        np.testing.assert_allclose(bf.f, -xi * np.eye(3), atol=1e-12)

    def test_chen_pure_state_properties(self, chen_rho):
        bf = bloch_decompose(chen_rho)
        np.testing.assert_allclose(bf.f @ bf.b, bf.a, atol=1e-12)
        np.testing.assert_allclose(bf.f.T @ bf.a, bf.b, atol=1e-12)

    def test_to_dict(self, singlet_rho):
        d = bloch_decompose(singlet_rho).to_dict()
        assert set(d) == {"a", "b", "F"}
        assert d["F"][0][0] == pytest.approx(-1.0)


class TestBlochAssemble:
    def test_singlet(self):
        rho = bloch_assemble(BlochForm(np.zeros(3), np.zeros(3), -np.eye(3)))
        np.testing.assert_allclose(rho.rho, SINGLET_RHO, atol=1e-15)

    def test_maximally_mixed(self):
        rho = bloch_assemble(BlochForm(np.zeros(3), np.zeros(3), np.zeros((3, 3))))
        np.testing.assert_allclose(rho.rho, np.eye(4) / 4)

    def test_product_state(self):
        z = np.array([0.0, 0.0, 1.0])
        rho = bloch_assemble(BlochForm(z, z, np.outer(z, z)))
        np.testing.assert_allclose(rho.rho, np.diag([1, 0, 0, 0]), atol=1e-15)

    def test_bounds_do_not_imply_positivity(self):
        with pytest.raises(NotPositive):
            bloch_assemble(BlochForm(np.zeros(3), np.zeros(3), np.eye(3)))

    def test_round_trip(self, chen_rho):
        back = bloch_assemble(bloch_decompose(chen_rho))
        np.testing.assert_allclose(back.rho, chen_rho.rho, atol=1e-12)


class TestPartialOperations:
    def test_singlet_marginals(self, singlet_rho):
        np.testing.assert_allclose(partial_trace_A(singlet_rho), IDENTITY2 / 2, atol=1e-15)
        np.testing.assert_allclose(partial_trace_B(singlet_rho), IDENTITY2 / 2, atol=1e-15)

    def test_product_marginals(self):
        rho_a = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
        rho_b = np.array([[0.4, 0.2], [0.2, 0.6]])
        rho = DensityMatrix(np.kron(rho_a, rho_b))
        np.testing.assert_allclose(partial_trace_B(rho), rho_a, atol=1e-15)
        np.testing.assert_allclose(partial_trace_A(rho), rho_b, atol=1e-15)

    def test_chen_marginal_matches_bloch_vector(self, chen_rho):
        a = CHEN_A
        expected = 0.5 * (IDENTITY2 + np.array([[a[2], a[0]], [a[0], -a[2]]]))
        np.testing.assert_allclose(partial_trace_B(chen_rho), expected, atol=1e-12)

    def test_partial_trace_consistency(self, chen_rho):
        q = observable_from_bloch([0.3, -0.4, 0.5])
        local = np.trace(partial_trace_B(chen_rho) @ q.matrix).real
        joint = expectation(chen_rho, joint_operator(q, QubitOperator(IDENTITY2)))
        assert abs(local - joint) < 1e-12

    def test_partial_transpose_singlet_spectrum(self, singlet_rho):
        w = hermitian_eigenvalues(partial_transpose_B(singlet_rho))
        np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-10)


class TestObservables:
    def test_zero_vector_gives_half_identity(self):
        np.testing.assert_allclose(observable_from_bloch([0, 0, 0]).matrix, IDENTITY2 / 2)

    def test_z_gives_projector(self):
        np.testing.assert_allclose(observable_from_bloch([0, 0, 1]).matrix, np.diag([1, 0]))

    def test_x(self):
        np.testing.assert_allclose(
            observable_from_bloch([1, 0, 0]).matrix, 0.5 * np.array([[1, 1], [1, 1]])
        )

    def test_outside_ball(self):
        with pytest.raises(BlochOutOfBall):
            observable_from_bloch([0.8, 0.8, 0])

    def test_joint_operator(self):
        ident = QubitOperator(IDENTITY2)
        np.testing.assert_allclose(joint_operator(ident, ident), np.eye(4))
        np.testing.assert_allclose(
            joint_operator(QubitOperator(SIGMA_Z), ident), np.diag([1, 1, -1, -1])
        )
        p = QubitOperator(np.diag([1, 0]))
        np.testing.assert_allclose(joint_operator(p, p), np.diag([1, 0, 0, 0]))
