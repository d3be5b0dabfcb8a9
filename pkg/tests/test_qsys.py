import numpy as np
import pytest
from scipy import linalg

from qdcluster.core.errors import LayoutError, OperatorError
from qdcluster.core.qsys import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    X_BASIS,
    HilbertLayout,
    LinOperator,
    StateVector,
    annihilation,
    apply_qubit_op,
    apply_to_all_qubits,
    cavity_vacuum_projector,
    collective_qubit_op,
    embed_cavity_op,
    embed_qubit_op,
    extend_to_cavity,
    mat_exp,
    overlap,
    permute_qubits,
    purity,
    reduced_density_matrix,
    unitary_fidelity_up_to_phase,
)


def random_state(layout, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return StateVector(layout, amps).normalize()


def random_hermitian(layout, seed=0):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(layout.dim, layout.dim)) + 1j * rng.normal(size=(layout.dim, layout.dim))
    return LinOperator(layout, (m + m.conj().T) / 2, hermitian_hint=True)


class TestLocalMatrices:
    def test_sigma_plus_raises_minus_to_plus(self):
        minus = np.array([0, 1], dtype=complex)
        np.testing.assert_allclose(SIGMA_PLUS @ minus, [1, 0])
        np.testing.assert_allclose(SIGMA_MINUS @ np.array([1, 0]), [0, 1])

    def test_x_basis_columns_are_sigma_x_eigenvectors(self):
        np.testing.assert_allclose(SIGMA_X @ X_BASIS[:, 0], X_BASIS[:, 0], atol=1e-15)
        np.testing.assert_allclose(SIGMA_X @ X_BASIS[:, 1], -X_BASIS[:, 1], atol=1e-15)

    def test_constants_are_read_only(self):
        with pytest.raises(ValueError):
            SIGMA_Z[0, 0] = 5

    def test_annihilation_lowers_photon_number(self):
        a = annihilation(3)
        np.testing.assert_allclose(np.diag(a.conj().T @ a).real, [0, 1, 2, 3])

    def test_annihilation_rejects_negative_cutoff(self):
        with pytest.raises(LayoutError):
            annihilation(-1)


class TestHilbertLayout:
    def test_dimensions(self):
        layout = HilbertLayout(3, 4)
        assert layout.qubit_dim == 8
        assert layout.cavity_dim == 5
        assert layout.dim == 40
        assert layout.qubits_only == HilbertLayout(3, 0)

    def test_index_puts_cavity_fastest(self):
        layout = HilbertLayout(2, 2)
        assert layout.index([0, 0], 1) == 1
        assert layout.index([0, 1], 0) == 3
        assert layout.index([1, 0], 2) == 8

    @pytest.mark.parametrize("n_qubits, cutoff", [(0, 0), (2, -1), (1.5, 0)])
    def test_invalid_shapes(self, n_qubits, cutoff):
        with pytest.raises(LayoutError):
            HilbertLayout(n_qubits, cutoff)

    def test_dimension_guard(self):
        with pytest.raises(LayoutError):
            HilbertLayout(40, 0)

    def test_photon_out_of_range(self):
        with pytest.raises(LayoutError):
            HilbertLayout(1, 1).index([0], 2)


class TestStateAndOperator:
    def test_wrong_length_rejected(self):
        with pytest.raises(LayoutError):
            StateVector(HilbertLayout(2), np.ones(3))

    def test_non_finite_rejected(self):
        with pytest.raises(OperatorError):
            StateVector(HilbertLayout(1), [np.nan, 0])

    def test_amplitudes_are_frozen(self):
        state = StateVector.basis(HilbertLayout(1), 0)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_normalize_zero_vector(self):
        with pytest.raises(OperatorError):
            StateVector(HilbertLayout(1), [0, 0]).normalize()

    def test_hermitian_hint_is_checked(self):
        with pytest.raises(OperatorError):
            LinOperator(HilbertLayout(1), SIGMA_PLUS, hermitian_hint=True)

    def test_layout_mismatch(self):
        a = LinOperator.identity(HilbertLayout(1))
        b = LinOperator.identity(HilbertLayout(2))
        with pytest.raises(LayoutError):
            a @ b

    def test_overlap_conjugates_left(self):
        layout = HilbertLayout(1)
        a = StateVector(layout, [1j, 0])
        b = StateVector(layout, [1, 0])
        assert overlap(a, b) == pytest.approx(-1j)


class TestEmbedding:
    def test_embed_matches_kron(self):
        layout = HilbertLayout(3, 1)
        op = embed_qubit_op(layout, 2, SIGMA_Z)
        expected = np.kron(np.kron(np.eye(2), SIGMA_Z), np.eye(2 * 2))
        np.testing.assert_allclose(op.matrix, expected)
        assert op.hermitian_hint

    def test_embed_site_out_of_range(self):
        with pytest.raises(LayoutError):
            embed_qubit_op(HilbertLayout(2), 3, SIGMA_Z)

    def test_embed_wrong_shape(self):
        with pytest.raises(OperatorError):
            embed_qubit_op(HilbertLayout(2), 1, np.eye(3))

    @pytest.mark.parametrize("n_qubits", [1, 2, 3])
    def test_embedding_is_a_homomorphism(self, n_qubits):
        rng = np.random.default_rng(n_qubits)
        layout = HilbertLayout(n_qubits, 1)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        for site in range(1, n_qubits + 1):
            product = embed_qubit_op(layout, site, a).matrix @ embed_qubit_op(layout, site, b).matrix
            np.testing.assert_allclose(product, embed_qubit_op(layout, site, a @ b).matrix, atol=1e-12)
        if n_qubits >= 2:
            first = embed_qubit_op(layout, 1, a).matrix
            last = embed_qubit_op(layout, n_qubits, b).matrix
            np.testing.assert_allclose(first @ last, last @ first, atol=1e-12)

    def test_collective_sigma_z_counts_plus_states(self):
        layout = HilbertLayout(3)
        total = collective_qubit_op(layout, SIGMA_Z)
        # |+,+,−⟩: dos +1 y un −1
        index = layout.index([0, 0, 1])
        assert total.matrix[index, index].real == pytest.approx(1.0)

    def test_cavity_operator_and_vacuum_projector(self):
        layout = HilbertLayout(1, 2)
        number = embed_cavity_op(layout, np.diag([0, 1, 2]))
        projector = cavity_vacuum_projector(layout)
        assert np.trace(projector.matrix).real == pytest.approx(2)
        np.testing.assert_allclose(projector.matrix @ number.matrix, 0)

    def test_extend_to_cavity(self):
        layout = HilbertLayout(2, 1)
        op = LinOperator(layout.qubits_only, np.kron(SIGMA_X, SIGMA_Z), hermitian_hint=True)
        extended = extend_to_cavity(op, layout)
        np.testing.assert_allclose(extended.matrix, np.kron(op.matrix, np.eye(2)))
        with pytest.raises(LayoutError):
            extend_to_cavity(op, HilbertLayout(3, 1))


class TestMatExp:
    def test_hermitian_path_matches_expm(self):
        h = random_hermitian(HilbertLayout(2, 1), seed=3)
        u = mat_exp(h, -0.7j)
        np.testing.assert_allclose(u.matrix, linalg.expm(-0.7j * h.matrix), atol=1e-12)
        assert u.unitarity_error() < 1e-12
        assert not u.hermitian_hint

    def test_general_path(self):
        layout = HilbertLayout(1)
        op = LinOperator(layout, SIGMA_PLUS)
        u = mat_exp(op, 2.0)
        np.testing.assert_allclose(u.matrix, np.eye(2) + 2.0 * SIGMA_PLUS)

    def test_zero_scale_is_identity(self):
        h = random_hermitian(HilbertLayout(2), seed=1)
        np.testing.assert_allclose(mat_exp(h, 0).matrix, np.eye(4), atol=1e-12)

    def test_non_finite_scale(self):
        with pytest.raises(OperatorError):
            mat_exp(LinOperator.identity(HilbertLayout(1)), complex(np.inf, 0))

    def test_matches_taylor_series(self):
        h = random_hermitian(HilbertLayout(3), seed=7)
        generator = -0.3j * h.matrix
        series = np.eye(8, dtype=complex)
        term = np.eye(8, dtype=complex)
        for order in range(1, 40):
            term = term @ generator / order
            series = series + term
        np.testing.assert_allclose(mat_exp(h, -0.3j).matrix, series, atol=1e-10)

    @pytest.mark.parametrize("n_qubits, cutoff", [(1, 0), (3, 0), (2, 3), (4, 1)])
    def test_group_property(self, n_qubits, cutoff):
        h = random_hermitian(HilbertLayout(n_qubits, cutoff), seed=n_qubits + cutoff)
        t1, t2 = 0.37, 1.21
        joined = mat_exp(h, -1j * t1).matrix @ mat_exp(h, -1j * t2).matrix
        np.testing.assert_allclose(joined, mat_exp(h, -1j * (t1 + t2)).matrix, atol=1e-9)

    def test_preserves_norm(self):
        layout = HilbertLayout(2, 2)
        u = mat_exp(random_hermitian(layout, seed=5), -2.3j)
        psi = random_state(layout, seed=6)
        assert np.linalg.norm(u.matrix @ psi.amplitudes) == pytest.approx(1.0, abs=1e-9)


class TestFidelity:
    def test_invariant_under_global_phase(self):
        layout = HilbertLayout(2, 1)
        u = mat_exp(random_hermitian(layout, seed=2), -1j)
        projector = cavity_vacuum_projector(layout)
        shifted = u.scaled(np.exp(0.4j))
        assert unitary_fidelity_up_to_phase(u, shifted, projector) == pytest.approx(1.0)

    def test_symmetric(self):
        layout = HilbertLayout(2, 1)
        u = mat_exp(random_hermitian(layout, seed=2), -1j)
        v = mat_exp(random_hermitian(layout, seed=5), -1j)
        projector = cavity_vacuum_projector(layout)
        assert unitary_fidelity_up_to_phase(u, v, projector) == pytest.approx(
            unitary_fidelity_up_to_phase(v, u, projector)
        )

    def test_rejects_non_projector(self):
        layout = HilbertLayout(1)
        identity = LinOperator.identity(layout)
        with pytest.raises(OperatorError):
            unitary_fidelity_up_to_phase(identity, identity, identity.scaled(2.0))
        with pytest.raises(OperatorError):
            unitary_fidelity_up_to_phase(identity, identity, LinOperator.zeros(layout))


class TestStateOperations:
    def test_apply_qubit_op_matches_embedding(self):
        layout = HilbertLayout(3, 1)
        state = random_state(layout, seed=4)
        direct = apply_qubit_op(state, 2, SIGMA_X)
        via_matrix = embed_qubit_op(layout, 2, SIGMA_X) @ state
        np.testing.assert_allclose(direct.amplitudes, via_matrix.amplitudes, atol=1e-14)

    def test_apply_to_all_qubits_matches_kron(self):
        amps = random_state(HilbertLayout(3), seed=6).amplitudes
        full = np.kron(np.kron(X_BASIS, X_BASIS), X_BASIS)
        np.testing.assert_allclose(apply_to_all_qubits(amps, 3, X_BASIS), full @ amps, atol=1e-14)

    def test_permute_swaps_qubits(self):
        layout = HilbertLayout(2)
        state = StateVector.basis(layout, layout.index([0, 1]))
        swapped = permute_qubits(state, [2, 1])
        assert abs(swapped.amplitudes[layout.index([1, 0])]) == pytest.approx(1.0)
        with pytest.raises(LayoutError):
            permute_qubits(state, [1, 1])

    def test_reduced_density_matrix_of_product_is_pure(self):
        layout = HilbertLayout(3)
        state = StateVector.basis(layout, layout.index([1, 0, 1]))
        rho = reduced_density_matrix(state, [2])
        np.testing.assert_allclose(rho, np.diag([1, 0]))
        assert purity(rho) == pytest.approx(1.0)

    def test_reduced_density_matrix_of_bell_pair(self):
        layout = HilbertLayout(2)
        state = StateVector(layout, [1, 0, 0, 1]).normalize()
        assert purity(reduced_density_matrix(state, [1])) == pytest.approx(0.5)
        with pytest.raises(LayoutError):
            reduced_density_matrix(state, [3])
