"""Two-group synthetic count histograms: bimodal footprint-like vs unimodal."""

from dataclasses import dataclass

import numpy as np

from .baselines import Labeling


@dataclass
class SimSpec:
    n: int = 200
    group1_frac: float = 0.6
    count_range: tuple = (4_000, 10_000)
    bins: int = 1000
    # (a, b) pairs for the two beta components of each group
    group1_betas: tuple = ((2.0, 6.0), (6.0, 2.0))
    group2_betas: tuple = ((1.0, 1.0), (3.0, 3.0))
    w_params: tuple = (10.0, 10.0)

    def validate(self):
        if not 0.0 < self.group1_frac < 1.0:
            raise ValueError("group1_frac must be in (0, 1)")
        low, high = self.count_range
        if low > high or low < 1:
            raise ValueError(f"bad count range {self.count_range}")
        if self.bins < 2:
            raise ValueError("need at least two bins")
        return self


LOW_COUNT_RANGE = (100, 2156)


def low_count_spec(**overrides):
    overrides.setdefault("count_range", LOW_COUNT_RANGE)
    return SimSpec(**overrides)


def _sample_density_points(betas, w_params, m, rng):
    w = rng.beta(*w_params)
    from_first = rng.random(m) < w
    x = np.empty(m)
    a1, b1 = betas[0]
    a2, b2 = betas[1]
    n1 = int(from_first.sum())
    x[from_first] = rng.beta(a1, b1, size=n1)
    x[~from_first] = rng.beta(a2, b2, size=m - n1)
    return x


def simulate(spec, rng):
    """Draw the count matrix and true group labels.

    Each sample: group by a Bernoulli(group1_frac), mixing weight
    W ~ Beta(w_params), total count m uniform over count_range (inclusive),
    m points from the two-component beta mixture, binned into equal-width
    bins on [0, 1] (half-open, last bin closed).
    """
    spec.validate()
    p = spec.bins
    counts = np.zeros((spec.n, p), dtype=np.int64)
    groups = (rng.random(spec.n) >= spec.group1_frac).astype(int)  # 0 = group 1
    low, high = spec.count_range
    for i in range(spec.n):
        m = int(rng.integers(low, high + 1))
        betas = spec.group1_betas if groups[i] == 0 else spec.group2_betas
        x = _sample_density_points(betas, spec.w_params, m, rng)
        bin_idx = np.minimum((x * p).astype(np.int64), p - 1)
        counts[i] = np.bincount(bin_idx, minlength=p)
    return counts, Labeling(labels=groups, k=2)
