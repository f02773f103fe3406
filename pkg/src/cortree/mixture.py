"""Truncated stick-breaking Dirichlet-process mixture of correlated-tree kernels.

The blocked Gibbs sweep runs, in order: per-sample PG auxiliaries omega,
per-sample splitting vectors psi (head then tail), per-cluster means,
per-cluster tail variances, per-cluster horseshoe sweep (correlated mode
only), cluster assignments Z, then stick weights pi. The truncation's last
stick absorbs the residual mass so pi always sums to one.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import kernel, tree
from .config import ConfigError
from .horseshoe import ghs_sweep
from .kernel import ClusterParams, init_cluster


class MixtureInternalError(RuntimeError):
    pass


@dataclass
class MixtureState:
    layout: tree.DyadicLayout
    q: int  # head size, 2^L - 1
    parent_counts: np.ndarray  # (n, n_internal) PG shape parameters, 0 on inactive nodes
    kappa: np.ndarray  # (n, n_internal)
    psi: np.ndarray  # (n, n_internal)
    omega: np.ndarray  # (n, n_internal)
    Z: np.ndarray  # (n,)
    pi: np.ndarray  # (K,)
    sticks: np.ndarray  # (K-1,)
    clusters: list  # K ClusterParams
    tail_layers: np.ndarray  # 1-based layer per tail coordinate
    head_layers: np.ndarray  # 1-based layer per head coordinate

    @property
    def n(self):
        return self.psi.shape[0]

    @property
    def K(self):
        return self.pi.size


@dataclass
class GibbsTrace:
    pi_trace: np.ndarray  # (iters, K), every iteration
    Z_samples: np.ndarray  # (kept, n), post burn-in
    mu_head_samples: np.ndarray  # (kept, K, q)
    mu_tail_samples: np.ndarray  # (kept, K, n_tail)
    psi_samples: np.ndarray | None = None  # (kept, n, n_internal), opt-in


@dataclass
class FitResult:
    labels: np.ndarray
    trace: GibbsTrace
    occupied: np.ndarray  # cluster ids present in the posterior labels
    sizes: dict  # cluster id -> size
    small_clusters: np.ndarray  # occupied clusters below the reporting threshold
    state: MixtureState


def init_state(count_matrix, init_labels, layout, config):
    """Assemble the augmented state from raw counts and initial assignments."""
    config.validate()
    count_matrix = np.asarray(count_matrix)
    n = count_matrix.shape[0]
    init_labels = np.asarray(init_labels, dtype=int)
    if init_labels.shape != (n,):
        raise ConfigError(f"init labels length {init_labels.size} != n={n}")
    if init_labels.min() < 0 or init_labels.max() >= config.n_clusters:
        raise ConfigError("init labels outside [0, K)")
    if config.cor_layers > layout.depth:
        raise ConfigError(
            f"correlated layers {config.cor_layers} exceed depth {layout.depth}"
        )

    q = layout.n_head(config.cor_layers)
    n_int = layout.n_internal
    split_layers = layout.split_layers()

    parent_counts = np.zeros((n, n_int), dtype=np.int64)
    kappa = np.zeros((n, n_int))
    psi = np.zeros((n, n_int))
    for i in range(n):
        node_counts = tree.propagate_counts(count_matrix[i], layout)
        parent, left = tree.split_counts(node_counts, layout)
        parent_counts[i] = parent
        kappa[i] = left - 0.5 * parent
        psi[i] = tree.empirical_psi(node_counts, layout)

    K = config.n_clusters
    clusters = []
    for k in range(K):
        params = init_cluster(q, n_int - q, ind_tree=config.ind_tree)
        members = psi[init_labels == k]
        if len(members):
            params.mu_head = members[:, :q].mean(axis=0)
            params.mu_tail = members[:, q:].mean(axis=0)
            if len(members) > 1:
                params.sigma2_tail = np.maximum(members[:, q:].var(axis=0), 1e-3)
                if config.ind_tree:
                    params.sigma2_head = np.maximum(members[:, :q].var(axis=0), 1e-3)
        clusters.append(params)

    return MixtureState(
        layout=layout,
        q=q,
        parent_counts=parent_counts,
        kappa=kappa,
        psi=psi,
        omega=np.zeros((n, n_int)),
        Z=init_labels.copy(),
        pi=np.full(K, 1.0 / K),
        sticks=np.full(max(K - 1, 0), 1.0 / K),
        clusters=clusters,
        tail_layers=split_layers[q:],
        head_layers=split_layers[:q],
    )


def update_omega(state, rng, b_exact=200):
    """Refresh all PG auxiliaries; exact zeros wherever the parent count is zero."""
    flat = kernel.sample_omega(
        state.parent_counts.ravel(), state.psi.ravel(), rng, b_exact=b_exact
    )
    state.omega = flat.reshape(state.omega.shape)


def update_psi(state, rng):
    """Per-sample conjugate Gaussian draws of head and tail splitting variables."""
    q = state.q
    for k in range(state.K):
        members = np.flatnonzero(state.Z == k)
        if members.size == 0:
            continue
        params = state.clusters[k]
        if params.ghs is not None:
            for i in members:
                state.psi[i, :q] = kernel.update_psi_head(
                    state.omega[i, :q], state.kappa[i, :q], params, rng
                )
        else:
            state.psi[np.ix_(members, range(q))] = kernel.update_psi_indep(
                state.omega[members][:, :q],
                state.kappa[members][:, :q],
                params.mu_head,
                params.sigma2_head,
                rng,
            )
        state.psi[np.ix_(members, range(q, state.psi.shape[1]))] = (
            kernel.update_psi_indep(
                state.omega[members][:, q:],
                state.kappa[members][:, q:],
                params.mu_tail,
                params.sigma2_tail,
                rng,
            )
        )


def update_clusters(state, config, rng):
    """Per-cluster mean, tail-variance, and precision updates."""
    q = state.q
    for k in range(state.K):
        params = state.clusters[k]
        members = np.flatnonzero(state.Z == k)
        heads = state.psi[members][:, :q]
        tails = state.psi[members][:, q:]

        params.mu_head = kernel.update_mu_head(heads, params, config.sigma2_mu, rng)
        params.mu_tail = kernel.update_mu_indep(
            tails, params.sigma2_tail, config.sigma2_mu_tail, rng
        )
        params.sigma2_tail = kernel.update_sigma2_indep(
            tails, params.mu_tail, state.tail_layers, config.alpha0, members.size, rng
        )
        if config.ind_tree:
            params.sigma2_head = kernel.update_sigma2_indep(
                heads, params.mu_head, state.head_layers, config.alpha0, members.size, rng
            )
        elif members.size < 2:
            # a lone member cannot anchor a flat-prior diagonal: the
            # mean-precision feedback diverges, so fall back to the prior
            ghs_sweep(params.ghs, np.zeros((q, q)), 0, rng)
        else:
            centered = heads - params.mu_head
            scatter = centered.T @ centered
            for _ in range(config.ghs_sweeps):
                ghs_sweep(
                    params.ghs,
                    scatter,
                    members.size,
                    rng,
                    diag_rate=config.ghs_diag_rate,
                )


def assignment_log_weights(state):
    """(n, K) matrix of log pi_k + log density of psi_i under cluster k."""
    q = state.q
    logw = np.empty((state.n, state.K))
    with np.errstate(divide="ignore"):
        log_pi = np.log(state.pi)
    for k in range(state.K):
        params = state.clusters[k]
        logw[:, k] = (
            log_pi[k]
            + kernel.log_density_head(state.psi[:, :q], params)
            + kernel.log_density_tail(state.psi[:, q:], params)
        )
    return logw


def update_Z(state, rng):
    """Categorical draws from the normalized assignment weights."""
    logw = assignment_log_weights(state)
    norm = logsumexp(logw, axis=1, keepdims=True)
    if not np.all(np.isfinite(norm)):
        raise MixtureInternalError("all assignment weights vanished")
    probs = np.exp(logw - norm)
    cum = np.cumsum(probs, axis=1)
    u = rng.random(state.n)
    state.Z = (u[:, None] > cum).sum(axis=1).astype(int)
    np.clip(state.Z, 0, state.K - 1, out=state.Z)


def update_pi(state, config, rng):
    """Stick updates via the two-Gamma ratio; last weight takes the residual stick."""
    K = state.K
    counts = np.bincount(state.Z, minlength=K)
    if K == 1:
        state.pi = np.ones(1)
        return
    tail_counts = np.concatenate((np.cumsum(counts[::-1])[::-1][1:], [0.0]))
    g1 = rng.gamma(1.0 + counts[: K - 1], 1.0)
    g2 = rng.gamma(config.dp_alpha + tail_counts[: K - 1], 1.0)
    sticks = g1 / (g1 + g2)
    pi = np.empty(K)
    remaining = 1.0
    for k in range(K - 1):
        pi[k] = sticks[k] * remaining
        remaining *= 1.0 - sticks[k]
    pi[K - 1] = remaining
    state.sticks = sticks
    state.pi = pi


def gibbs_iteration(state, config, rng):
    """One full blocked Gibbs sweep, mutating state in place."""
    update_omega(state, rng, b_exact=config.pg_b_exact)
    update_psi(state, rng)
    update_clusters(state, config, rng)
    update_Z(state, rng)
    update_pi(state, config, rng)
    return state


def majority_labels(Z_samples):
    """Per-sample most frequent assignment over the retained iterations."""
    n = Z_samples.shape[1]
    labels = np.empty(n, dtype=int)
    for i in range(n):
        vals, freq = np.unique(Z_samples[:, i], return_counts=True)
        labels[i] = vals[np.argmax(freq)]
    return labels


def fit(count_matrix, init_labels, config, rng, layout=None, progress=None):
    """Run burn-in plus retained iterations and summarize posterior labels."""
    config.validate()
    count_matrix = np.asarray(count_matrix)
    if layout is None:
        layout = tree.build_layout(count_matrix.shape[1], config.depth)
    state = init_state(count_matrix, init_labels, layout, config)

    total = config.burn_in + config.n_keep
    K, q, n_tail = state.K, state.q, layout.n_internal - state.q
    pi_trace = np.empty((total, K))
    Z_samples = np.empty((config.n_keep, state.n), dtype=int)
    mu_head_samples = np.empty((config.n_keep, K, q))
    mu_tail_samples = np.empty((config.n_keep, K, n_tail))
    psi_samples = (
        np.empty((config.n_keep, state.n, layout.n_internal))
        if config.trace_psi
        else None
    )

    for it in range(total):
        gibbs_iteration(state, config, rng)
        pi_trace[it] = state.pi
        kept = it - config.burn_in
        if kept >= 0:
            Z_samples[kept] = state.Z
            for k in range(K):
                mu_head_samples[kept, k] = state.clusters[k].mu_head
                mu_tail_samples[kept, k] = state.clusters[k].mu_tail
            if psi_samples is not None:
                psi_samples[kept] = state.psi
        if progress is not None:
            progress(it, total, state)

    labels = majority_labels(Z_samples)
    occupied, sizes = np.unique(labels, return_counts=True)
    size_map = dict(zip(occupied.tolist(), sizes.tolist()))
    small = occupied[sizes < config.report_min_size]
    trace = GibbsTrace(
        pi_trace=pi_trace,
        Z_samples=Z_samples,
        mu_head_samples=mu_head_samples,
        mu_tail_samples=mu_tail_samples,
        psi_samples=psi_samples,
    )
    return FitResult(
        labels=labels,
        trace=trace,
        occupied=occupied,
        sizes=size_map,
        small_clusters=small,
        state=state,
    )


def posterior_mean_densities(result, layout):
    """Per-cluster posterior-mean leaf probabilities mapped to bin densities.

    Averages the leaf distribution implied by each retained draw of the
    cluster mean vector.
    """
    trace = result.trace
    kept, K, q = trace.mu_head_samples.shape
    dens = np.zeros((K, layout.p))
    for k in range(K):
        acc = np.zeros(layout.n_leaves)
        for t in range(kept):
            mu = np.concatenate((trace.mu_head_samples[t, k], trace.mu_tail_samples[t, k]))
            acc += tree.leaf_probabilities(mu, layout)
        dens[k] = tree.leaf_to_bin_density(acc / kept, layout)
    return dens
