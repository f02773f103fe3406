"""Polya-Gamma random variates PG(b, c) for integer b.

Small b: sums of exact PG(1, c) draws using the alternating-series
accept/reject sampler (Devroye-style proposal: truncated exponential plus
truncated inverse-Gaussian, split at t = 0.64). Large b: a moment-matched
Gaussian truncated at zero; the PG mean and variance are available in closed
form from the Laplace transform.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

_TRUNC = 0.64
_MAX_SERIES_TERMS = 200

DEFAULT_B_EXACT = 200


@dataclass(frozen=True)
class PgDraw:
    value: float
    b: int
    c: float


def pg_mean(b, c):
    """E[PG(b, c)] = b * tanh(c/2) / (2c), with limit b/4 at c = 0."""
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    small = np.abs(c) < 1e-8
    cs = np.where(small, 1.0, c)
    out = np.where(small, 0.25 * b, b * np.tanh(cs / 2.0) / (2.0 * cs))
    return out if out.ndim else float(out)


def pg_var(b, c):
    """Var[PG(b, c)] = b * (tanh(h) - h sech^2(h)) / (2 c^3), h = c/2; limit b/24."""
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    small = np.abs(c) < 1e-4
    cs = np.where(small, 1.0, c)
    h = cs / 2.0
    out = np.where(
        small, b / 24.0, b * (np.tanh(h) - h / np.cosh(h) ** 2) / (2.0 * cs**3)
    )
    return out if out.ndim else float(out)


def _series_coef(n, x):
    """n-th coefficient of the alternating series bounding the PG(1,.) density."""
    k = n + 0.5
    out = np.empty_like(x)
    left = x <= _TRUNC
    xl = x[left]
    out[left] = np.pi * k * (2.0 / (np.pi * xl)) ** 1.5 * np.exp(-2.0 * k * k / xl)
    xr = x[~left]
    out[~left] = np.pi * k * np.exp(-k * k * np.pi**2 * xr / 2.0)
    return out


def _mass_texpon(z):
    """Probability of proposing from the right (exponential) piece."""
    t = _TRUNC
    fz = np.pi**2 / 8.0 + z * z / 2.0
    b = np.sqrt(1.0 / t) * (t * z - 1.0)
    a = -np.sqrt(1.0 / t) * (t * z + 1.0)
    x0 = np.log(fz) + fz * t
    xb = x0 - z + log_ndtr(b)
    xa = x0 + z + log_ndtr(a)
    qdivp = 4.0 / np.pi * (np.exp(xb) + np.exp(xa))
    return 1.0 / (1.0 + qdivp)


def _rtigauss(z, rng):
    """Inverse-Gaussian(mu = 1/z, lambda = 1) truncated to (0, _TRUNC], vectorized."""
    r = _TRUNC
    out = np.empty_like(z)
    big_mu = z < 1.0 / r  # mu > truncation point: chi-square style rejection

    pending = np.flatnonzero(big_mu)
    while pending.size:
        m = pending.size
        e1 = rng.standard_exponential(m)
        e2 = rng.standard_exponential(m)
        ok = e1 * e1 <= 2.0 * e2 / r
        x = r / (1.0 + r * e1) ** 2
        alpha = np.exp(-0.5 * z[pending] ** 2 * x)
        acc = ok & (rng.random(m) <= alpha)
        out[pending[acc]] = x[acc]
        pending = pending[~acc]

    pending = np.flatnonzero(~big_mu)
    while pending.size:
        m = pending.size
        mu = 1.0 / z[pending]
        y = rng.standard_normal(m) ** 2
        muy = mu * y
        x = mu + 0.5 * mu * muy - 0.5 * mu * np.sqrt(4.0 * muy + muy * muy)
        flip = rng.random(m) > mu / (mu + x)
        x[flip] = mu[flip] ** 2 / x[flip]
        acc = x <= r
        out[pending[acc]] = x[acc]
        pending = pending[~acc]
    return out


def _series_accept(x, rng):
    """Alternating-series accept/reject decision for proposals x."""
    accepted = np.zeros(x.size, dtype=bool)
    s = _series_coef(0, x)
    y = rng.random(x.size) * s
    live = np.arange(x.size)
    for n in range(1, _MAX_SERIES_TERMS + 1):
        coef = _series_coef(n, x)
        if n % 2 == 1:
            s = s - coef
            hit = y <= s
            accepted[live[hit]] = True
            keep = ~hit
        else:
            s = s + coef
            keep = y <= s  # y > s means reject, drop from the live set
        if not keep.any():
            break
        live, x, s, y = live[keep], x[keep], s[keep], y[keep]
        if live.size == 0:
            break
    # cap reached: remaining mass is numerically zero, treat as reject
    return accepted


def sample_pg1(c, rng, p_right=None):
    """Exact PG(1, c) draws, one per entry of c.

    p_right optionally carries precomputed _mass_texpon(|c|/2) values; callers
    issuing many draws with shared c can amortize that cost.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    z = 0.5 * np.abs(c)
    if p_right is None:
        p_right = _mass_texpon(z)
    fz_all = np.pi**2 / 8.0 + z * z / 2.0
    out = np.empty_like(z)
    pending = np.arange(z.size)
    while pending.size:
        zz = z[pending]
        m = zz.size
        fz = fz_all[pending]
        use_exp = rng.random(m) < p_right[pending]
        x = np.empty(m)
        x[use_exp] = _TRUNC + rng.standard_exponential(use_exp.sum()) / fz[use_exp]
        x[~use_exp] = _rtigauss(zz[~use_exp], rng)
        acc = _series_accept(x, rng)
        out[pending[acc]] = 0.25 * x[acc]
        pending = pending[~acc]
    return out


def sample_pg_array(b, c, rng, b_exact=DEFAULT_B_EXACT):
    """PG(b_i, c_i) draws for integer arrays b and matching c.

    b == 0 gives exactly 0. 0 < b <= b_exact sums b exact PG(1, c) draws;
    larger b uses the moment-matched Gaussian truncated at zero.
    """
    b = np.atleast_1d(np.asarray(b))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if b.shape != c.shape:
        raise ValueError(f"shape mismatch {b.shape} vs {c.shape}")
    if np.any(b < 0):
        raise ValueError("PG shape parameter b must be nonnegative")
    out = np.zeros(b.shape, dtype=float)

    small = (b > 0) & (b <= b_exact)
    if np.any(small):
        reps = b[small].astype(np.int64)
        cs = c[small]
        p_right = _mass_texpon(0.5 * np.abs(cs))
        draws = sample_pg1(np.repeat(cs, reps), rng, p_right=np.repeat(p_right, reps))
        edges = np.concatenate(([0], np.cumsum(reps)[:-1]))
        out[small] = np.add.reduceat(draws, edges)

    big = b > b_exact
    if np.any(big):
        mean = pg_mean(b[big], c[big])
        sd = np.sqrt(pg_var(b[big], c[big]))
        draw = mean + sd * rng.standard_normal(mean.shape)
        bad = np.flatnonzero(draw <= 0.0)
        while bad.size:  # truncate at zero by redrawing (vanishing probability)
            draw[bad] = mean[bad] + sd[bad] * rng.standard_normal(bad.size)
            bad = bad[draw[bad] <= 0.0]
        out[big] = draw
    return out


def sample_pg(b, c, rng, b_exact=DEFAULT_B_EXACT):
    """Single PG(b, c) draw with its parameters attached."""
    b = int(b)
    if b < 0:
        raise ValueError("PG shape parameter b must be nonnegative")
    if b == 0:
        return PgDraw(value=0.0, b=0, c=float(c))
    value = float(sample_pg_array(np.array([b]), np.array([c]), rng, b_exact)[0])
    return PgDraw(value=value, b=b, c=float(c))
