import numpy as np
import pytest
from scipy.special import expit

from cortree import baselines, kernel, mixture, tree
from cortree.config import ConfigError, RunConfig
from cortree.polya_gamma import sample_pg_array


def two_blob_counts(n=24, p=16, m=300, seed=0):
    """Counts concentrated on the left half vs the right half."""
    rng = np.random.default_rng(seed)
    counts = np.zeros((n, p), dtype=np.int64)
    truth = np.repeat([0, 1], n // 2)
    for i in range(n):
        probs = np.full(p, 0.2 / p)
        half = slice(0, p // 2) if truth[i] == 0 else slice(p // 2, p)
        probs[half] += 0.8 / (p // 2)
        counts[i] = rng.multinomial(m, probs)
    return counts, truth


class TestInitState:
    def test_shapes(self):
        counts, truth = two_blob_counts()
        layout = tree.build_layout(16, 4)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2)
        state = mixture.init_state(counts, truth, layout, cfg)
        assert state.q == 3
        assert state.psi.shape == (24, 15)
        assert state.parent_counts.shape == (24, 15)
        assert len(state.clusters) == 2
        np.testing.assert_allclose(state.pi, [0.5, 0.5])

    def test_kappa_matches_definition(self):
        counts, truth = two_blob_counts(n=4)
        layout = tree.build_layout(16, 4)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2)
        state = mixture.init_state(counts, truth, layout, cfg)
        node_counts = tree.propagate_counts(counts[0], layout)
        np.testing.assert_allclose(
            state.kappa[0], tree.kappa_vector(node_counts, layout)
        )

    def test_bad_labels_rejected(self):
        counts, _ = two_blob_counts(n=4)
        layout = tree.build_layout(16, 4)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2)
        with pytest.raises(ConfigError):
            mixture.init_state(counts, np.array([0, 1, 2, 0]), layout, cfg)
        with pytest.raises(ConfigError):
            mixture.init_state(counts, np.array([0, 1]), layout, cfg)


class TestUpdates:
    def make_state(self, ind_tree=False, k=2):
        counts, truth = two_blob_counts()
        layout = tree.build_layout(16, 4)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=k, ind_tree=ind_tree)
        return mixture.init_state(counts, truth, layout, cfg), cfg, truth

    def test_omega_zero_on_empty_parents(self):
        state, cfg, _ = self.make_state()
        rng = np.random.default_rng(0)
        mixture.update_omega(state, rng)
        zero_parents = state.parent_counts == 0
        assert np.all(state.omega[zero_parents] == 0.0)
        assert np.all(state.omega[~zero_parents] > 0.0)

    def test_pi_sums_to_one(self):
        state, cfg, _ = self.make_state(k=4)
        rng = np.random.default_rng(1)
        for _ in range(20):
            mixture.update_pi(state, cfg, rng)
            assert state.pi.sum() == pytest.approx(1.0)
            assert np.all(state.pi >= 0)

    def test_pi_tracks_occupancy(self):
        state, cfg, _ = self.make_state(k=3)
        state.Z = np.zeros(state.n, dtype=int)
        rng = np.random.default_rng(2)
        draws = []
        for _ in range(200):
            mixture.update_pi(state, cfg, rng)
            draws.append(state.pi.copy())
        assert np.mean(draws, axis=0)[0] > 0.85

    def test_update_Z_follows_dominant_weight(self):
        state, cfg, truth = self.make_state()
        rng = np.random.default_rng(3)
        # separate the cluster means hard and make densities tight
        q = state.q
        mixture.update_omega(state, rng)
        mixture.update_psi(state, rng)
        for k in (0, 1):
            members = state.psi[truth == k]
            state.clusters[k].mu_head = members[:, :q].mean(axis=0)
            state.clusters[k].mu_tail = members[:, q:].mean(axis=0)
            state.clusters[k].sigma2_tail[:] = 0.05
            state.clusters[k].ghs.Omega = 20.0 * np.eye(q)
            state.clusters[k].ghs.Sigma = np.eye(q) / 20.0
        mixture.update_Z(state, rng)
        assert baselines.ari(state.Z, truth) == 1.0

    def test_update_clusters_handles_empty_and_singleton(self):
        state, cfg, _ = self.make_state(k=3)
        state.Z = np.zeros(state.n, dtype=int)
        state.Z[0] = 1  # cluster 1 singleton, cluster 2 empty
        rng = np.random.default_rng(4)
        mixture.update_omega(state, rng)
        mixture.update_psi(state, rng)
        mixture.update_clusters(state, cfg, rng)
        for params in state.clusters:
            assert np.all(np.isfinite(params.mu_head))
            assert np.all(params.sigma2_tail > 0)
            assert np.all(np.isfinite(params.ghs.Omega))

    def test_majority_labels(self):
        Z = np.array([[0, 1, 2], [0, 1, 1], [1, 1, 2]])
        np.testing.assert_array_equal(mixture.majority_labels(Z), [0, 1, 2])


class TestFit:
    def test_recovers_blobs_correlated(self):
        counts, truth = two_blob_counts()
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2, burn_in=30, n_keep=20)
        rng = np.random.default_rng(5)
        result = mixture.fit(counts, truth, cfg, rng)
        assert baselines.ari(result.labels, truth) == 1.0

    def test_recovers_blobs_independent(self):
        counts, truth = two_blob_counts()
        cfg = RunConfig(
            depth=4, cor_layers=2, n_clusters=2, burn_in=30, n_keep=20, ind_tree=True
        )
        rng = np.random.default_rng(6)
        result = mixture.fit(counts, truth, cfg, rng)
        assert baselines.ari(result.labels, truth) == 1.0

    def test_reproducible(self):
        counts, truth = two_blob_counts(n=12)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2, burn_in=5, n_keep=5)
        a = mixture.fit(counts, truth, cfg, np.random.default_rng(7))
        b = mixture.fit(counts, truth, cfg, np.random.default_rng(7))
        np.testing.assert_array_equal(a.labels, b.labels)
        np.testing.assert_array_equal(a.trace.pi_trace, b.trace.pi_trace)
        np.testing.assert_array_equal(
            a.trace.mu_head_samples, b.trace.mu_head_samples
        )

    def test_trace_shapes_and_result_fields(self):
        counts, truth = two_blob_counts(n=12)
        cfg = RunConfig(
            depth=4,
            cor_layers=2,
            n_clusters=2,
            burn_in=3,
            n_keep=4,
            trace_psi=True,
            report_min_size=5,
        )
        result = mixture.fit(counts, truth, cfg, np.random.default_rng(8))
        assert result.trace.pi_trace.shape == (7, 2)
        assert result.trace.Z_samples.shape == (4, 12)
        assert result.trace.psi_samples.shape == (4, 12, 15)
        assert sum(result.sizes.values()) == 12
        assert set(result.occupied) == set(result.sizes)

    def test_posterior_densities_integrate_to_one(self):
        counts, truth = two_blob_counts(n=12)
        layout = tree.build_layout(16, 4)
        cfg = RunConfig(depth=4, cor_layers=2, n_clusters=2, burn_in=3, n_keep=4)
        result = mixture.fit(counts, truth, cfg, np.random.default_rng(9), layout=layout)
        dens = mixture.posterior_mean_densities(result, layout)
        np.testing.assert_allclose(dens.mean(axis=1), 1.0, atol=1e-9)

    def test_degenerate_splits_stay_neutral(self):
        # p=3 at depth 2 leaves one structurally inactive split; its
        # auxiliaries stay 0 and the fit ignores it entirely
        rng = np.random.default_rng(10)
        counts = rng.multinomial(50, [0.5, 0.3, 0.2], size=10)
        cfg = RunConfig(depth=2, cor_layers=1, n_clusters=1, burn_in=3, n_keep=3)
        result = mixture.fit(counts, np.zeros(10, dtype=int), cfg, rng)
        layout = result.state.layout
        inactive = ~layout.active_splits()
        assert inactive.any()
        assert np.all(result.state.parent_counts[:, inactive] == 0)
        assert np.all(result.state.omega[:, inactive] == 0.0)


class TestGewekeSmoke:
    def test_pg_augmentation_joint(self):
        # forward: psi ~ N(mu, s2), left | psi ~ Binomial(m, logistic(psi));
        # transition: omega ~ PG(m, psi), psi | omega, left, then redraw left.
        # Both chains target the same joint, so psi moments must agree.
        rng = np.random.default_rng(11)
        mu, s2, m, iters = 0.4, 0.8, 20, 6000

        fwd_psi = mu + np.sqrt(s2) * rng.standard_normal(iters)

        psi = mu
        chain = np.empty(iters)
        for t in range(iters):
            left = rng.binomial(m, expit(psi))
            kap = left - 0.5 * m
            om = sample_pg_array(np.array([m]), np.array([psi]), rng)[0]
            psi = kernel.update_psi_indep(om, kap, mu, s2, rng)
            chain[t] = psi
        chain = chain[500:]

        for stat in (np.mean, lambda x: np.mean(x**2)):
            a, b = stat(fwd_psi), stat(chain)
            se = np.sqrt(np.var(fwd_psi) / fwd_psi.size + 6.0 * np.var(chain) / chain.size)
            assert abs(a - b) < 5 * se
