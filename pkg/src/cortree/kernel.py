"""Per-cluster correlated-tree kernel: Polya-Gamma augmented conditionals.

The splitting-variable vector splits into a correlated head (first L layers,
multivariate normal with horseshoe-shrunk precision) and an independent tail
(scalar normals with layer-decaying inverse-gamma variance priors). All
conditionals below are exact conjugate updates given the PG auxiliaries.

In independent-tree mode the head is treated like extra tail coordinates:
diagonal per-coordinate variances, no horseshoe state.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .horseshoe import GhsState, init_ghs, ghs_sweep
from .polya_gamma import sample_pg_array, DEFAULT_B_EXACT

_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class ClusterParams:
    """Kernel parameters of one mixture component.

    ghs is None in independent-tree mode; sigma2_head is None in correlated
    mode (the head covariance then lives in ghs.Sigma).
    """

    mu_head: np.ndarray
    mu_tail: np.ndarray
    sigma2_tail: np.ndarray
    ghs: GhsState | None = None
    sigma2_head: np.ndarray | None = None

    @property
    def q(self):
        return self.mu_head.size

    def copy(self):
        return ClusterParams(
            mu_head=self.mu_head.copy(),
            mu_tail=self.mu_tail.copy(),
            sigma2_tail=self.sigma2_tail.copy(),
            ghs=self.ghs.copy() if self.ghs is not None else None,
            sigma2_head=None if self.sigma2_head is None else self.sigma2_head.copy(),
        )


def init_cluster(q, n_tail, ind_tree=False):
    params = ClusterParams(
        mu_head=np.zeros(q),
        mu_tail=np.zeros(n_tail),
        sigma2_tail=np.ones(n_tail),
    )
    if ind_tree:
        params.sigma2_head = np.ones(q)
    else:
        params.ghs = init_ghs(q)
    return params


def sample_omega(parent_counts, psi, rng, b_exact=DEFAULT_B_EXACT):
    """PG auxiliaries omega ~ PG(n(parent), psi) per splitting variable."""
    return sample_pg_array(parent_counts, psi, rng, b_exact=b_exact)


def head_conditional(omega_head, kappa_head, mu, prec_prior):
    """Posterior mean and precision of the head given PG auxiliaries.

    Posterior precision is prec_prior + diag(omega); the mean solves
    (prec_prior + diag(omega)) m = prec_prior mu + kappa.
    """
    prec = prec_prior + np.diag(omega_head)
    mean = np.linalg.solve(prec, prec_prior @ mu + kappa_head)
    return mean, prec


def sample_mvn_from_precision(mean, prec, rng):
    """Draw N(mean, prec^-1) through a Cholesky factor of the precision."""
    chol = np.linalg.cholesky(prec)
    return mean + solve_triangular(chol.T, rng.standard_normal(mean.size), lower=False)


def update_psi_head(omega_head, kappa_head, params, rng):
    """Gaussian full-conditional draw of one sample's correlated head."""
    mean, prec = head_conditional(
        omega_head, kappa_head, params.mu_head, params.ghs.Omega
    )
    return sample_mvn_from_precision(mean, prec, rng)


def scalar_conditional(omega, kappa, mu, sigma2):
    """Posterior mean and variance of an independent coordinate."""
    prec = 1.0 / sigma2 + omega
    mean = (mu / sigma2 + kappa) / prec
    return mean, 1.0 / prec


def update_psi_indep(omega, kappa, mu, sigma2, rng):
    """Coordinatewise Gaussian draws; works on any matching array shapes."""
    mean, var = scalar_conditional(omega, kappa, mu, sigma2)
    return mean + np.sqrt(var) * rng.standard_normal(np.shape(mean))


def update_mu_head(psi_heads, params, sigma2_mu, rng):
    """Conjugate draw of the cluster head mean given its members' heads."""
    q = params.q
    n_k = psi_heads.shape[0]
    if params.ghs is not None:
        omega = params.ghs.Omega
        prec = np.eye(q) / sigma2_mu + n_k * omega
        mean = np.linalg.solve(prec, omega @ psi_heads.sum(axis=0))
        return sample_mvn_from_precision(mean, prec, rng)
    prec = 1.0 / sigma2_mu + n_k / params.sigma2_head
    mean = psi_heads.sum(axis=0) / params.sigma2_head / prec
    return mean + rng.standard_normal(q) / np.sqrt(prec)


def update_mu_indep(psi_block, sigma2, sigma2_mu, rng):
    """Coordinatewise conjugate mean draw for independent coordinates."""
    n_k, width = psi_block.shape
    prec = 1.0 / sigma2_mu + n_k / sigma2
    mean = psi_block.sum(axis=0) / sigma2 / prec
    return mean + rng.standard_normal(width) / np.sqrt(prec)


def sigma2_posterior(alpha0, layer, n_k, ssq):
    """InvGamma full-conditional parameters (shape, scale) for one tail variance."""
    return alpha0 + n_k / 2.0, 1.0 / layer + ssq / 2.0


def update_sigma2_indep(psi_block, mu, layers, alpha0, n_k, rng):
    """Inverse-gamma draws of independent-coordinate variances.

    Prior scale is 1/layer: deeper coordinates shrink harder a priori.
    """
    ssq = ((psi_block - mu) ** 2).sum(axis=0)
    shape, scale = sigma2_posterior(alpha0, layers.astype(float), n_k, ssq)
    return scale / rng.gamma(shape, 1.0, size=mu.size)


def log_density_head(psi_heads, params):
    """Head log-density per row of psi_heads under the cluster's normal prior."""
    diff = np.atleast_2d(psi_heads) - params.mu_head
    q = params.q
    if params.ghs is not None:
        chol = np.linalg.cholesky(params.ghs.Omega)
        half = diff @ chol
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return 0.5 * logdet - 0.5 * q * _LOG_2PI - 0.5 * (half**2).sum(axis=1)
    quad = (diff**2 / params.sigma2_head).sum(axis=1)
    return -0.5 * (np.log(params.sigma2_head).sum() + q * _LOG_2PI + quad)


def log_density_tail(psi_tails, params):
    """Tail log-density per row: independent normals."""
    diff = np.atleast_2d(psi_tails) - params.mu_tail
    quad = (diff**2 / params.sigma2_tail).sum(axis=1)
    n_tail = params.mu_tail.size
    return -0.5 * (np.log(params.sigma2_tail).sum() + n_tail * _LOG_2PI + quad)


def log_density_psi(psi, params, q):
    """Full splitting-vector log-density (head + tail) for one sample."""
    psi = np.asarray(psi, dtype=float)
    head = log_density_head(psi[:q], params)[0]
    tail = log_density_tail(psi[q:], params)[0] if psi.size > q else 0.0
    return float(head + tail)
