"""Distance-based clustering baselines and the Adjusted Rand Index."""

from dataclasses import dataclass

import numpy as np
from scipy.special import comb


class LabelingError(ValueError):
    pass


@dataclass
class Labeling:
    labels: np.ndarray
    k: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=int)
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.k):
            raise LabelingError("labels outside [0, k)")


def row_normalize(X):
    """Counts -> row proportions; all-zero rows become uniform."""
    X = np.asarray(X, dtype=float)
    sums = X.sum(axis=1, keepdims=True)
    sums[sums == 0] = 1.0
    return X / sums


def _assign(X, centers):
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1), d2


def kmeans(X, k, rng, max_iter=100, trace=None):
    """Lloyd iterations from a Forgy start (k distinct random rows).

    Empty clusters are re-seeded from the point farthest from its center.
    trace, if a list, collects the objective after each assignment step.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if k > n:
        raise LabelingError(f"k={k} exceeds n={n}")
    if k == n:
        return Labeling(labels=np.arange(n), k=k)
    centers = X[rng.choice(n, size=k, replace=False)].copy()
    labels = np.full(n, -1)
    for _ in range(max_iter):
        new_labels, d2 = _assign(X, centers)
        point_d2 = d2[np.arange(n), new_labels]
        for j in range(k):
            if not np.any(new_labels == j):
                far = int(np.argmax(point_d2))
                centers[j] = X[far]
                new_labels[far] = j
                point_d2[far] = 0.0
        if trace is not None:
            trace.append(float(point_d2.sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            centers[j] = X[labels == j].mean(axis=0)
    return Labeling(labels=labels, k=k)


def _pairwise_sq_dists(X):
    sq = (X**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def pam(X, k, rng, max_iter=100, trace=None):
    """Classic BUILD + SWAP k-medoids with squared Euclidean cost.

    Swaps are accepted only on strict cost decrease. trace, if a list,
    collects the total cost after BUILD and after each accepted swap.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if k > n:
        raise LabelingError(f"k={k} exceeds n={n}")
    d2 = _pairwise_sq_dists(X)

    # BUILD: greedy cost-minimizing medoid additions
    medoids = [int(np.argmin(d2.sum(axis=1)))]
    while len(medoids) < k:
        current = d2[:, medoids].min(axis=1)
        gains = np.maximum(current[None, :] - d2, 0.0).sum(axis=1)
        gains[medoids] = -np.inf
        medoids.append(int(np.argmax(gains)))
    medoids = np.array(medoids)

    def total_cost(meds):
        return float(d2[:, meds].min(axis=1).sum())

    cost = total_cost(medoids)
    if trace is not None:
        trace.append(cost)
    for _ in range(max_iter):
        improved = False
        non_medoids = np.setdiff1d(np.arange(n), medoids)
        best = (0.0, None, None)
        for mi in range(k):
            trial = medoids.copy()
            for h in non_medoids:
                trial[mi] = h
                delta = total_cost(trial) - cost
                if delta < best[0]:
                    best = (delta, mi, h)
            trial[mi] = medoids[mi]
        if best[1] is not None:
            medoids[best[1]] = best[2]
            cost += best[0]
            improved = True
            if trace is not None:
                trace.append(cost)
        if not improved:
            break
    labels = np.argmin(d2[:, medoids], axis=1)
    return Labeling(labels=labels, k=k)


def ari(a, b):
    """Adjusted Rand Index between two labelings of the same items."""
    la = a.labels if isinstance(a, Labeling) else np.asarray(a, dtype=int)
    lb = b.labels if isinstance(b, Labeling) else np.asarray(b, dtype=int)
    if la.size != lb.size:
        raise LabelingError(f"label lengths differ: {la.size} vs {lb.size}")
    n = la.size
    _, ia = np.unique(la, return_inverse=True)
    _, ib = np.unique(lb, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)

    sum_cells = comb(table, 2).sum()
    sum_rows = comb(table.sum(axis=1), 2).sum()
    sum_cols = comb(table.sum(axis=0), 2).sum()
    total = comb(n, 2)
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = 0.5 * (sum_rows + sum_cols)
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def contingency_table(a, b):
    la = a.labels if isinstance(a, Labeling) else np.asarray(a, dtype=int)
    lb = b.labels if isinstance(b, Labeling) else np.asarray(b, dtype=int)
    if la.size != lb.size:
        raise LabelingError(f"label lengths differ: {la.size} vs {lb.size}")
    rows, ia = np.unique(la, return_inverse=True)
    cols, ib = np.unique(lb, return_inverse=True)
    table = np.zeros((rows.size, cols.size), dtype=np.int64)
    np.add.at(table, (ia, ib), 1)
    return rows, cols, table


def discretize_scores(scores, levels):
    """Quantile-bin a continuous score vector into ordered levels."""
    if levels < 2:
        raise LabelingError("need at least two levels")
    scores = np.asarray(scores, dtype=float)
    edges = np.quantile(scores, np.linspace(0, 1, levels + 1)[1:-1])
    labels = np.searchsorted(edges, scores, side="left")
    return Labeling(labels=labels, k=levels)
