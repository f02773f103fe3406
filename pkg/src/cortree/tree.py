"""Dyadic partition of histogram bins and the splitting-variable parameterization.

A depth-D binary tree is laid out in heap order: node (layer l, position j)
lives at flat index 2^l - 1 + j, so children of index t are 2t+1 and 2t+2.
Internal nodes (layers 0..D-1) carry one splitting variable psi each, the
logit of the probability that mass goes to the *left* child. Vectorizing
internal nodes in heap order is exactly "top to bottom, left to right".
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, expit


class TreeInputError(ValueError):
    """Invalid data fed to a tree operation (negative counts, broken additivity)."""


class TreeConfigError(ValueError):
    """Invalid layout configuration."""


def node_index(layer, position):
    """Flat heap index of node (layer, position)."""
    if layer < 0 or position < 0 or position >= (1 << layer):
        raise TreeConfigError(f"bad node path ({layer}, {position})")
    return (1 << layer) - 1 + position


def node_path(index):
    """Inverse of node_index: flat heap index -> (layer, position)."""
    if index < 0:
        raise TreeConfigError(f"bad node index {index}")
    layer = int(index + 1).bit_length() - 1
    return layer, index - ((1 << layer) - 1)


@dataclass
class DyadicLayout:
    """Bin ranges for every node of a depth-D dyadic tree over p bins.

    starts/ends are half-open [start, end) bin ranges per flat node index.
    A node with end - start <= 1 cannot split; its right child is empty and
    its splitting variable is structurally inactive.
    """

    p: int
    depth: int
    starts: np.ndarray = field(repr=False)
    ends: np.ndarray = field(repr=False)

    @property
    def n_nodes(self):
        return (1 << (self.depth + 1)) - 1

    @property
    def n_internal(self):
        """Number of splitting variables (= internal nodes, layers 0..D-1)."""
        return (1 << self.depth) - 1

    @property
    def n_leaves(self):
        return 1 << self.depth

    def layers(self):
        """Layer index of every node."""
        idx = np.arange(self.n_nodes)
        return np.floor(np.log2(idx + 1)).astype(int)

    def split_layers(self):
        """1-based layer of each splitting variable (= layer of its left child)."""
        idx = np.arange(self.n_internal)
        return np.floor(np.log2(idx + 1)).astype(int) + 1

    def active_splits(self):
        """Boolean mask over splitting variables: both children nonempty."""
        n_int = self.n_internal
        return (self.ends[:n_int] - self.starts[:n_int]) >= 2

    def n_head(self, cor_layers):
        """Number of splitting variables in the correlated head (first L layers)."""
        if cor_layers < 0 or cor_layers > self.depth:
            raise TreeConfigError(
                f"correlated layers {cor_layers} out of range for depth {self.depth}"
            )
        return (1 << cor_layers) - 1


def build_layout(p, depth=None):
    """Build the dyadic layout for p bins.

    The default depth is ceil(log2 p), giving single-bin leaves. Shallower
    trees are allowed (leaves then cover several bins); deeper trees produce
    empty-range nodes below the single-bin level.
    """
    if p < 1:
        raise TreeConfigError(f"need at least one bin, got p={p}")
    min_depth = max(1, int(np.ceil(np.log2(p)))) if p > 1 else 1
    if depth is None:
        depth = min_depth
    if depth < 1:
        raise TreeConfigError(f"depth must be >= 1, got {depth}")

    n_nodes = (1 << (depth + 1)) - 1
    starts = np.zeros(n_nodes, dtype=np.int64)
    ends = np.zeros(n_nodes, dtype=np.int64)
    ends[0] = p
    # left child takes ceil of the parent width
    for t in range((1 << depth) - 1):
        a, b = starts[t], ends[t]
        mid = a + (b - a + 1) // 2 if b > a else a
        starts[2 * t + 1], ends[2 * t + 1] = a, mid
        starts[2 * t + 2], ends[2 * t + 2] = mid, b
    return DyadicLayout(p=p, depth=depth, starts=starts, ends=ends)


def propagate_counts(hist, layout):
    """Node counts for one sample: sum of the histogram over each node's range."""
    hist = np.asarray(hist)
    if hist.ndim != 1 or len(hist) != layout.p:
        raise TreeInputError(f"histogram length {hist.shape} != p={layout.p}")
    if np.any(hist < 0):
        raise TreeInputError("negative bin counts")
    cs = np.concatenate(([0], np.cumsum(hist.astype(np.int64))))
    return cs[layout.ends] - cs[layout.starts]


def check_additivity(node_counts, layout):
    """Raise unless counts(parent) == counts(left) + counts(right) everywhere."""
    n_int = layout.n_internal
    parent = node_counts[:n_int]
    left = node_counts[1 : 2 * n_int + 1 : 2]
    right = node_counts[2 : 2 * n_int + 2 : 2]
    if not np.array_equal(parent, left + right):
        raise TreeInputError("parent/child count additivity violated")


def split_probabilities(psi):
    """Left-split probabilities logistic(psi)."""
    return expit(np.asarray(psi, dtype=float))


def leaf_probabilities(psi, layout):
    """Probability mass on each depth-D leaf implied by the splitting variables.

    Inactive splits route all mass to the left child; empty-range leaves get
    exactly 0.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (layout.n_internal,):
        raise TreeInputError(f"psi length {psi.shape} != {layout.n_internal}")
    active = layout.active_splits()
    v_left = np.where(active, expit(psi), 1.0)
    empty = layout.ends <= layout.starts

    probs = np.zeros(layout.n_nodes)
    probs[0] = 1.0
    for t in range(layout.n_internal):
        probs[2 * t + 1] = probs[t] * v_left[t]
        probs[2 * t + 2] = probs[t] * (1.0 - v_left[t])
    probs[empty] = 0.0
    return probs[layout.n_internal :]


def leaf_to_bin_density(leaf_probs, layout):
    """Spread leaf masses uniformly over their bin ranges; density wrt p bins on [0,1]."""
    dens = np.zeros(layout.p)
    starts = layout.starts[layout.n_internal :]
    ends = layout.ends[layout.n_internal :]
    for prob, a, b in zip(leaf_probs, starts, ends):
        if b > a:
            dens[a:b] += prob / (b - a)
    return dens * layout.p


def split_counts(node_counts, layout):
    """Per-split (parent count, left-child count), zeroed on inactive splits."""
    n_int = layout.n_internal
    active = layout.active_splits()
    parent = np.where(active, node_counts[:n_int], 0)
    left = np.where(active, node_counts[1 : 2 * n_int + 1 : 2], 0)
    return parent, left


def kappa_vector(node_counts, layout):
    """kappa = n(left child) - n(parent)/2 per splitting variable."""
    parent, left = split_counts(node_counts, layout)
    return left - 0.5 * parent


def tree_log_likelihood(node_counts, psi, layout):
    """Log-likelihood of a tree-distributed sample: binomial splits down the tree.

    Inactive splits and zero-count parents contribute 0.
    """
    psi = np.asarray(psi, dtype=float)
    check_additivity(node_counts, layout)
    parent, left = split_counts(node_counts, layout)
    mask = parent > 0
    n, k, ps = parent[mask], left[mask], psi[mask]
    choose = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    # log V = psi - log(1+e^psi), log(1-V) = -log(1+e^psi)
    return float(np.sum(choose + k * ps - n * np.logaddexp(0.0, ps)))


def empirical_psi(node_counts, layout, smooth=0.5):
    """Smoothed empirical logits logit((n_left + s) / (n_parent + 2s)); 0 where inactive."""
    parent, left = split_counts(node_counts, layout)
    v = (left + smooth) / (parent + 2 * smooth)
    psi = np.log(v) - np.log1p(-v)
    psi[parent == 0] = 0.0
    return psi


def vectorize(values_by_path, layout):
    """Map {(layer, position): value} over internal nodes to the flat psi vector."""
    psi = np.zeros(layout.n_internal)
    for (layer, position), value in values_by_path.items():
        idx = node_index(layer, position)
        if idx >= layout.n_internal:
            raise TreeInputError(f"node ({layer}, {position}) is not internal")
        psi[idx] = value
    return psi


def devectorize(psi, layout):
    """Inverse of vectorize: flat psi vector to {(layer, position): value}."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (layout.n_internal,):
        raise TreeInputError(f"psi length {psi.shape} != {layout.n_internal}")
    return {node_path(i): psi[i] for i in range(layout.n_internal)}
