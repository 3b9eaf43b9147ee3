import numpy as np
import pytest

from oracles import kron_by_loops, rotation_2x2, scaled_taylor_expm, taylor_expm, vec_by_loops

from nhdyn import (
    DimensionError,
    NumericRangeError,
    SizeLimitError,
    eig_general,
    expm,
    kron,
    nullspace,
    op_norm,
)
from nhdyn.errors import ConfigError


class TestExpm:
    def test_zero_matrix(self):
        assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))

    def test_rotation_generator_against_taylor_oracle(self):
        theta = 0.3
        a = np.array([[0.0, theta], [-theta, 0.0]])
        expected = taylor_expm(a)
        assert np.allclose(expected, rotation_2x2(theta), atol=1e-15)
        assert np.abs(expm(a) - expected).max() < 1e-15

    def test_group_inverse_small_norm(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            a *= 2.0 / np.linalg.norm(a, 2)
            assert op_norm(expm(a) @ expm(-a) - np.eye(4)) < 1e-12

    def test_matches_scaled_taylor_at_moderate_norm(self):
        rng = np.random.default_rng(8)
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        a *= 10.0 / np.linalg.norm(a, 2)
        e = expm(a)
        ref = scaled_taylor_expm(a)
        assert op_norm(e - ref) / op_norm(ref) < 1e-12

    def test_accuracy_at_norm_fifty(self):
        # skew-Hermitian argument of norm 50: the exponential is unitary,
        # so both the unitarity defect and the gap to the squared-Taylor
        # oracle are meaningful at full precision
        rng = np.random.default_rng(10)
        h = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        h = h + h.conj().T
        a = 1j * h * (50.0 / np.linalg.norm(h, 2))
        e = expm(a)
        assert op_norm(e.conj().T @ e - np.eye(5)) < 1e-12
        assert op_norm(e - scaled_taylor_expm(a)) < 1e-11

    def test_norm_bound_for_unitary_like_factors(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            t = rng.uniform(-3, 3)
            assert op_norm(expm(1j * h * t)) <= np.exp(abs(t) * op_norm(h)) * (1 + 1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            expm(np.zeros((2, 3)))

    def test_overflow_raises(self):
        with pytest.raises(NumericRangeError):
            expm(np.diag([2000.0, 2000.0]))

    def test_rejects_nan_entries(self):
        with pytest.raises(NumericRangeError):
            expm(np.array([[np.nan, 0.0], [0.0, 0.0]]))


class TestEigGeneral:
    def test_diagonal(self):
        spec = eig_general(np.diag([1.0, 2.0, 3.0]))
        assert np.allclose(spec.eigenvalues, [1, 2, 3])
        assert np.allclose(np.abs(spec.right_vectors), np.eye(3), atol=1e-14)
        assert spec.condition_estimate < 10

    def test_defective_jordan_block(self):
        spec = eig_general(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert np.allclose(spec.eigenvalues, [0, 0], atol=1e-12)
        assert spec.condition_estimate > 1e10

    def test_upper_triangular_by_hand(self):
        # (A - 2I) v = 0 with A = [[1,1],[0,2]] forces v prop (1,1)
        spec = eig_general(np.array([[1.0, 1.0], [0.0, 2.0]]))
        assert np.allclose(spec.eigenvalues, [1, 2])
        v = spec.right_vectors[:, 1]
        assert abs(abs(np.vdot(v, np.array([1, 1]) / np.sqrt(2))) - 1) < 1e-12

    def test_unit_columns_and_residuals(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        spec = eig_general(a)
        assert np.allclose(np.linalg.norm(spec.right_vectors, axis=0), 1.0)
        res = np.linalg.norm(
            a @ spec.right_vectors - spec.right_vectors * spec.eigenvalues, axis=0
        )
        assert res.max() <= 1e-10 * op_norm(a)

    def test_reconstruction_with_distinct_eigenvalues(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            spec = eig_general(a)
            rebuilt = (
                spec.right_vectors
                @ np.diag(spec.eigenvalues)
                @ np.linalg.inv(spec.right_vectors)
            )
            assert np.linalg.norm(rebuilt - a) / np.linalg.norm(a) < 1e-10


class TestNullspace:
    def test_full_rank_gives_zero_columns(self):
        assert nullspace(np.eye(3)).shape == (3, 0)

    def test_zero_matrix_gives_full_basis(self):
        basis = nullspace(np.zeros((2, 3)))
        assert basis.shape == (3, 3)
        assert np.allclose(basis.conj().T @ basis, np.eye(3), atol=1e-12)

    def test_coordinate_kernel(self):
        basis = nullspace(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
        assert basis.shape == (3, 1)
        assert abs(abs(basis[2, 0]) - 1.0) < 1e-14

    def test_contract_on_random_rank_deficient(self):
        rng = np.random.default_rng(13)
        tol = 1e-10
        for _ in range(5):
            left = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
            right = rng.normal(size=(3, 7)) + 1j * rng.normal(size=(3, 7))
            l = left @ right  # rank 3, kernel dim 4
            basis = nullspace(l, tol)
            sigma_max = op_norm(l)
            assert basis.shape == (7, 4)
            assert op_norm(l @ basis) <= 10 * tol * sigma_max
            assert np.abs(basis.conj().T @ basis - np.eye(4)).max() < 1e-12

    def test_rank_tol_must_be_in_range(self):
        with pytest.raises(ConfigError):
            nullspace(np.eye(2), rank_tol_rel=1.5)


class TestKron:
    def test_identity_blocks(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_block_structure(self):
        k = kron(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))
        expected = np.zeros((4, 4))
        expected[0:2, 2:4] = np.eye(2)
        assert np.array_equal(k, expected)

    def test_against_loop_oracle(self):
        rng = np.random.default_rng(14)
        a = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        b = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
        assert np.array_equal(kron(a, b), kron_by_loops(a, b))

    def test_vec_identity_on_random_triples(self):
        rng = np.random.default_rng(15)
        for _ in range(5):
            a, x, b = (
                rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
                for _ in range(3)
            )
            lhs = vec_by_loops(a @ x @ b)
            rhs = kron(b.T, a) @ vec_by_loops(x)
            assert np.abs(lhs - rhs).max() < 1e-13

    def test_size_guard(self):
        with pytest.raises(SizeLimitError):
            kron(np.zeros((4000, 4000)), np.zeros((3, 3)))


class TestOpNorm:
    def test_identity(self):
        assert op_norm(np.eye(5)) == pytest.approx(1.0)

    def test_diagonal_complex(self):
        assert op_norm(np.diag([3.0, -4.0j])) == pytest.approx(4.0)

    def test_nilpotent_by_gram_matrix(self):
        # sigma_max^2 is the top eigenvalue of A^† A = diag(0, 4)
        assert op_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0)
