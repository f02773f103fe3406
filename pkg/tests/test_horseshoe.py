import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cortree import horseshoe as ghs


class TestState:
    def test_init_shapes(self):
        state = ghs.init_ghs(4)
        np.testing.assert_array_equal(state.Omega, np.eye(4))
        np.testing.assert_array_equal(state.Sigma, np.eye(4))
        assert state.Lambda2.shape == (4, 4)
        assert state.tau2_ghs > 0 and state.xi > 0

    def test_copy_is_deep(self):
        state = ghs.init_ghs(3)
        clone = state.copy()
        clone.Omega[0, 1] = 9.0
        assert state.Omega[0, 1] == 0.0


class TestConditionals:
    def test_diag_gamma_shape_rate(self):
        shape, rate = ghs.diag_gamma_shape_rate(10, 4.0)
        assert shape == pytest.approx(6.0)
        assert rate == pytest.approx(2.0)

    def test_diag_gamma_empty_cluster(self):
        shape, rate = ghs.diag_gamma_shape_rate(0, 0.0)
        assert shape == pytest.approx(1.0)


def sample_scatter(Omega_true, n, rng):
    Sigma = np.linalg.inv(Omega_true)
    X = rng.multivariate_normal(np.zeros(len(Sigma)), Sigma, size=n)
    return X.T @ X


class TestSweep:
    def test_pd_and_inverse_consistency(self):
        rng = np.random.default_rng(0)
        q, n = 6, 80
        S = sample_scatter(np.eye(q), n, rng)
        state = ghs.init_ghs(q)
        for _ in range(30):
            ghs.ghs_sweep(state, S, n, rng)
            ghs.check_pd(state)
            np.testing.assert_allclose(state.Omega @ state.Sigma, np.eye(q), atol=1e-8)
            np.testing.assert_allclose(state.Omega, state.Omega.T, atol=1e-10)

    def test_tridiagonal_recovery_small(self):
        rng = np.random.default_rng(1)
        q, n = 5, 500
        Omega_true = 2.0 * np.eye(q) + np.diag([-1.0] * (q - 1), 1) + np.diag(
            [-1.0] * (q - 1), -1
        )
        S = sample_scatter(Omega_true, n, rng)
        state = ghs.init_ghs(q)
        for _ in range(100):
            ghs.ghs_sweep(state, S, n, rng)
        keep = []
        for _ in range(200):
            ghs.ghs_sweep(state, S, n, rng)
            keep.append(state.Omega.copy())
        mean = np.mean(keep, axis=0)
        off = ~np.eye(q, dtype=bool)
        truth_nz = (np.abs(Omega_true) > 0.1) & off
        est_nz = (np.abs(mean) > 0.1) & off
        assert (est_nz & truth_nz).sum() / truth_nz.sum() >= 0.8
        truth_z = (~truth_nz) & off
        assert (est_nz & truth_z).sum() / max(1, truth_z.sum()) <= 0.2

    def test_empty_cluster_prior_refresh(self):
        rng = np.random.default_rng(2)
        state = ghs.init_ghs(4)
        ghs.ghs_sweep(state, np.zeros((4, 4)), 0, rng)
        np.testing.assert_array_equal(state.Omega, np.eye(4))
        ghs.check_pd(state)

    def test_univariate_case(self):
        rng = np.random.default_rng(3)
        state = ghs.init_ghs(1)
        ghs.ghs_sweep(state, np.array([[12.0]]), 20, rng)
        assert state.Omega[0, 0] > 0
        assert state.Sigma[0, 0] == pytest.approx(1.0 / state.Omega[0, 0])

    def test_asymmetric_scatter_rejected(self):
        rng = np.random.default_rng(4)
        state = ghs.init_ghs(2)
        S = np.array([[1.0, 0.5], [0.2, 1.0]])
        with pytest.raises(ghs.GhsInputError):
            ghs.ghs_sweep(state, S, 5, rng)

    @given(seed=st.integers(0, 500), q=st.integers(2, 6))
    @settings(max_examples=20, deadline=None)
    def test_sweep_keeps_pd(self, seed, q):
        rng = np.random.default_rng(seed)
        n = 30
        S = sample_scatter(np.eye(q), n, rng)
        state = ghs.init_ghs(q)
        for _ in range(5):
            ghs.ghs_sweep(state, S, n, rng)
        ghs.check_pd(state)
        np.testing.assert_allclose(state.Omega @ state.Sigma, np.eye(q), atol=1e-7)

    def test_diagonal_concentrates_near_truth(self):
        # with a diagonal truth and lots of data, omega_jj should track 1/s_jj * n
        rng = np.random.default_rng(5)
        q, n = 3, 2000
        Omega_true = np.diag([1.0, 4.0, 0.25])
        S = sample_scatter(Omega_true, n, rng)
        state = ghs.init_ghs(q)
        for _ in range(50):
            ghs.ghs_sweep(state, S, n, rng)
        draws = []
        for _ in range(100):
            ghs.ghs_sweep(state, S, n, rng)
            draws.append(state.Omega.copy())
        keep = np.mean(draws, axis=0)
        np.testing.assert_allclose(np.diag(keep), np.diag(Omega_true), rtol=0.25)
