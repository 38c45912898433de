import numpy as np
import pytest

from gospaces.numerics import (
    DEFAULT_POLICY,
    TolerancePolicy,
    cluster_values,
    commutant_basis,
    kernel_basis,
    psd_kernel,
    solve_least_squares,
    subspace_intersection,
    symmetric_eigendecomposition,
)


class TestTolerancePolicy:
    def test_defaults(self):
        p = TolerancePolicy()
        assert p.rel_rank_tol == 1e-10
        assert p.feas_tol == 1e-8
        assert p.margin_factor == 1e4
        assert p.infeas_tol == 1e-4

    @pytest.mark.parametrize("kwargs", [
        {"rel_rank_tol": 0.0},
        {"rel_rank_tol": 1e-6, "feas_tol": 1e-8},
        {"feas_tol": 1.5},
        {"margin_factor": 2.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TolerancePolicy(**kwargs)


class TestLeastSquares:
    def test_identity(self):
        x, res = solve_least_squares(np.eye(2), [1.0, 2.0])
        assert np.allclose(x, [1.0, 2.0])
        assert res < 1e-14

    def test_zero_map(self):
        x, res = solve_least_squares(np.zeros((2, 2)), [1.0, 0.0])
        assert np.allclose(x, 0.0)
        assert res == pytest.approx(1.0)

    def test_rank_deficient_against_pinv_oracle(self):
        M = np.array([[1.0, 0.0], [0.0, 0.0]])
        b = np.array([3.0, 4.0])
        x, res = solve_least_squares(M, b)
        x_oracle = np.linalg.pinv(M) @ b          # minimum-norm oracle
        assert np.allclose(x, x_oracle)
        assert np.allclose(x, [3.0, 0.0])
        assert res == pytest.approx(0.8)          # ||(0,4)|| / ||(3,4)||

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            solve_least_squares(np.eye(2), [1.0, 2.0, 3.0])

    def test_residual_orthogonal_to_column_space(self):
        rng = np.random.default_rng(5)
        for trial in range(20):
            rows, cols = rng.integers(2, 12, size=2)
            M = rng.standard_normal((rows, cols))
            if trial % 3 == 0 and cols >= 2:
                M[:, -1] = M[:, 0]               # force rank deficiency
            b = rng.standard_normal(rows)
            x, _ = solve_least_squares(M, b)
            assert np.abs(M.T @ (M @ x - b)).max() < DEFAULT_POLICY.feas_tol

    def test_normal_equation_path_matches_lstsq(self):
        rng = np.random.default_rng(7)
        M = rng.standard_normal((5000, 40))
        b = rng.standard_normal(5000)
        x_big, res_big = solve_least_squares(M, b)
        x_ref, *_ = np.linalg.lstsq(M, b, rcond=None)
        assert np.allclose(x_big, x_ref, atol=1e-8)
        assert res_big == pytest.approx(
            np.linalg.norm(M @ x_ref - b) / np.linalg.norm(b), rel=1e-9)

    def test_min_norm_on_wide_system(self):
        M = np.array([[1.0, 1.0]])
        x, res = solve_least_squares(M, [2.0])
        assert np.allclose(x, [1.0, 1.0])        # min-norm solution
        assert res < 1e-14


class TestKernelBasis:
    def test_full_rank(self):
        assert kernel_basis(np.eye(3)).shape == (3, 0)

    def test_zero_matrix(self):
        K = kernel_basis(np.zeros((3, 3)))
        assert K.shape == (3, 3)
        assert np.allclose(K.T @ K, np.eye(3))

    def test_rank_one(self):
        K = kernel_basis(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert K.shape == (2, 1)
        v = np.array([1.0, -1.0]) / np.sqrt(2.0)
        assert abs(abs(K[:, 0] @ v) - 1.0) < 1e-12

    def test_kernel_vectors_annihilated(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            M = rng.standard_normal((6, 8))
            M[:, 6] = M[:, 0] + M[:, 1]
            K = kernel_basis(M)
            smax = np.linalg.norm(M, 2)
            assert K.shape[1] >= 2
            for j in range(K.shape[1]):
                assert np.linalg.norm(M @ K[:, j]) <= DEFAULT_POLICY.feas_tol * smax

    def test_noise_scale_matrix_is_zero_map(self):
        M = 1e-15 * np.random.default_rng(0).standard_normal((4, 4))
        assert kernel_basis(M).shape == (4, 4)


class TestSymmetricEig:
    def test_sorted_diag(self):
        lam, _ = symmetric_eigendecomposition(np.diag([2.0, 1.0]))
        assert np.allclose(lam, [1.0, 2.0])

    def test_offdiag_oracle(self):
        # hand diagonalization: eigenpairs (-1, (1,-1)/sqrt2), (1, (1,1)/sqrt2)
        lam, V = symmetric_eigendecomposition(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(lam, [-1.0, 1.0])
        for col, ref in zip(V.T, [np.array([1.0, -1.0]), np.array([1.0, 1.0])]):
            assert abs(abs(col @ ref / np.sqrt(2.0)) - 1.0) < 1e-12

    def test_zero(self):
        lam, _ = symmetric_eigendecomposition(np.zeros((4, 4)))
        assert np.allclose(lam, 0.0)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            symmetric_eigendecomposition(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((7, 7))
        S = A + A.T
        lam, V = symmetric_eigendecomposition(S)
        assert np.linalg.norm(V @ np.diag(lam) @ V.T - S) <= \
            DEFAULT_POLICY.feas_tol * np.linalg.norm(S)


class TestHelpers:
    def test_psd_kernel(self):
        D = np.diag([0.0, 0.0, 1.0, 5.0])
        K = psd_kernel(D)
        assert K.shape == (4, 2)
        assert np.abs(D @ K).max() < 1e-12

    def test_commutant_of_rotation_block(self):
        J = np.array([[0.0, -1.0], [1.0, 0.0]])
        basis = commutant_basis([J])
        assert len(basis) == 2                    # span{I, J}

    def test_commutant_of_irreducible_pair(self):
        # so(3) standard action has commutant = scalars
        from conftest import so_basis_raw
        basis = commutant_basis(list(so_basis_raw(3)))
        assert len(basis) == 1

    def test_subspace_intersection(self):
        U = np.eye(4)[:, :2]
        V = np.eye(4)[:, 1:3]
        W = subspace_intersection(U, V)
        assert W.shape == (4, 1)
        assert abs(abs(W[1, 0]) - 1.0) < 1e-12

    def test_cluster_values(self):
        cl = cluster_values([1.0, 1.0 + 1e-9, 2.0, 5.0, 5.0], rel_tol=1e-6)
        assert [len(c) for c in cl] == [2, 1, 2]
