"""Column-wise Gibbs sweep for a precision matrix under the graphical horseshoe prior.

Off-diagonal precision entries get independent horseshoe priors
N(0, lambda_ij^2 * tau^2) with half-Cauchy local and global scales, realized
through inverse-gamma auxiliaries (nu_ij for each lambda_ij, xi for tau).
Diagonal entries carry a flat prior. The covariance is maintained jointly
with the precision via blockwise inverse identities, so no full matrix
inversion happens inside the sweep.

The global shrinkage scale is called tau2_ghs throughout: the mixture model
uses "tau" for the independent-tail parameter collection, a different object.
"""

from dataclasses import dataclass, field

import numpy as np


class GhsInputError(ValueError):
    pass


class GhsInternalError(RuntimeError):
    """Loss of positive definiteness; indicates a bug, never expected."""


@dataclass
class GhsState:
    """Precision Omega, its inverse Sigma, and the horseshoe auxiliaries."""

    Omega: np.ndarray
    Sigma: np.ndarray
    Lambda2: np.ndarray
    Nu: np.ndarray
    tau2_ghs: float = 1.0
    xi: float = 1.0

    @property
    def q(self):
        return self.Omega.shape[0]

    def copy(self):
        return GhsState(
            Omega=self.Omega.copy(),
            Sigma=self.Sigma.copy(),
            Lambda2=self.Lambda2.copy(),
            Nu=self.Nu.copy(),
            tau2_ghs=self.tau2_ghs,
            xi=self.xi,
        )


def init_ghs(q):
    """Unit initialization: identity precision, unit shrinkage scales."""
    return GhsState(
        Omega=np.eye(q),
        Sigma=np.eye(q),
        Lambda2=np.ones((q, q)),
        Nu=np.ones((q, q)),
        tau2_ghs=1.0,
        xi=1.0,
    )


def diag_gamma_shape_rate(n_k, s_jj):
    """Gamma full-conditional parameters of the diagonal component."""
    return n_k / 2.0 + 1.0, s_jj / 2.0


def _inv_gamma(rng, shape, scale):
    """InvGamma(shape, scale) draw(s): reciprocal of Gamma(shape, rate=scale)."""
    return scale / rng.gamma(shape, 1.0, size=np.shape(scale) or None)


def _prior_refresh(state, rng):
    """No-data update: keep Omega at identity, refresh auxiliaries from their priors."""
    q = state.q
    state.Omega = np.eye(q)
    state.Sigma = np.eye(q)
    state.Nu = _inv_gamma(rng, 0.5, np.ones((q, q)))
    state.Lambda2 = _inv_gamma(rng, 0.5, 1.0 / state.Nu)
    state.xi = float(_inv_gamma(rng, 0.5, 1.0))
    state.tau2_ghs = float(_inv_gamma(rng, 0.5, 1.0 / state.xi))
    iu = np.triu_indices(q, 1)
    state.Lambda2[(iu[1], iu[0])] = state.Lambda2[iu]
    state.Nu[(iu[1], iu[0])] = state.Nu[iu]
    return state


def ghs_sweep(state, S, n_k, rng, diag_rate=0.0):
    """One full column-wise Gibbs sweep given scatter matrix S over n_k members.

    Mutates and returns state. With n_k = 0 the improper flat prior on the
    diagonal has no proper conditional, so the state resets to the unit
    initialization with fresh hyperparameter draws.

    diag_rate > 0 puts an Exp(diag_rate) prior on the diagonal gamma
    components instead of the flat prior. When this matrix models the
    precision of latent coordinates that are themselves resampled under it,
    the flat prior admits a slow multiplicative runaway (tight precision
    pins the latent values to their mean, which shrinks the scatter, which
    tightens the next precision draw); a weak exponential rate caps that
    feedback without noticeably perturbing data-dominated columns.
    """
    S = np.asarray(S, dtype=float)
    q = state.q
    if S.shape != (q, q):
        raise GhsInputError(f"scatter shape {S.shape} != ({q}, {q})")
    if not np.allclose(S, S.T, atol=1e-10):
        raise GhsInputError("scatter matrix not symmetric")
    if n_k < 0:
        raise GhsInputError("negative member count")
    if n_k == 0:
        return _prior_refresh(state, rng)

    Omega, Sigma = state.Omega, state.Sigma
    for j in range(q):
        idx = np.r_[0:j, j + 1 : q]
        s_12 = S[idx, j]
        s_22 = S[j, j]

        sigma_12 = Sigma[idx, j]
        sigma_22 = Sigma[j, j]
        inv_omega_11 = Sigma[np.ix_(idx, idx)] - np.outer(sigma_12, sigma_12) / sigma_22

        shape, rate = diag_gamma_shape_rate(n_k, s_22)
        gamma_draw = rng.gamma(shape, 1.0 / max(rate + diag_rate, 1e-10))

        if q == 1:
            Omega[0, 0] = gamma_draw
            Sigma[0, 0] = 1.0 / gamma_draw
            continue

        v_12 = state.Lambda2[idx, j] * state.tau2_ghs
        c_inv = s_22 * inv_omega_11 + np.diag(1.0 / v_12)
        try:
            chol = np.linalg.cholesky(c_inv)
        except np.linalg.LinAlgError as exc:
            raise GhsInternalError("conditional precision not PD") from exc
        mean = np.linalg.solve(c_inv, -s_12)
        beta = mean + np.linalg.solve(chol.T, rng.standard_normal(q - 1))

        Omega[idx, j] = Omega[j, idx] = beta
        io11_beta = inv_omega_11 @ beta
        Omega[j, j] = gamma_draw + beta @ io11_beta

        # blockwise inverse keeps Sigma consistent with Omega
        Sigma[j, j] = 1.0 / gamma_draw
        Sigma[idx, j] = Sigma[j, idx] = -io11_beta / gamma_draw
        Sigma[np.ix_(idx, idx)] = inv_omega_11 + np.outer(io11_beta, io11_beta) / gamma_draw

        lam2 = _inv_gamma(
            rng, 1.0, 1.0 / state.Nu[idx, j] + beta**2 / (2.0 * state.tau2_ghs)
        )
        nu = _inv_gamma(rng, 1.0, 1.0 + 1.0 / lam2)
        state.Lambda2[idx, j] = state.Lambda2[j, idx] = lam2
        state.Nu[idx, j] = state.Nu[j, idx] = nu

    iu = np.triu_indices(q, 1)
    if iu[0].size:
        ssq = np.sum(Omega[iu] ** 2 / state.Lambda2[iu])
        state.tau2_ghs = float(
            _inv_gamma(rng, (q * (q - 1) / 2.0 + 1.0) / 2.0, 1.0 / state.xi + ssq / 2.0)
        )
        state.xi = float(_inv_gamma(rng, 1.0, 1.0 + 1.0 / state.tau2_ghs))
    return state


def check_pd(state, tol=0.0):
    """Smallest eigenvalue of Omega; raises if not strictly positive."""
    smallest = float(np.linalg.eigvalsh(state.Omega)[0])
    if smallest <= tol:
        raise GhsInternalError(f"Omega lost positive definiteness ({smallest})")
    return smallest
