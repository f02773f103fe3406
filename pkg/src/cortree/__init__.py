"""Correlated dyadic-tree density kernels and their Dirichlet-process mixture."""

from .config import RunConfig
from .simulate import SimSpec, low_count_spec
from .tree import build_layout, propagate_counts, leaf_probabilities, tree_log_likelihood
from .polya_gamma import sample_pg, sample_pg_array, pg_mean, pg_var
from .horseshoe import GhsState, init_ghs, ghs_sweep
from .mixture import fit, gibbs_iteration
from .baselines import kmeans, pam, ari, discretize_scores, Labeling

__all__ = [
    "RunConfig",
    "SimSpec",
    "low_count_spec",
    "build_layout",
    "propagate_counts",
    "leaf_probabilities",
    "tree_log_likelihood",
    "sample_pg",
    "sample_pg_array",
    "pg_mean",
    "pg_var",
    "GhsState",
    "init_ghs",
    "ghs_sweep",
    "fit",
    "gibbs_iteration",
    "kmeans",
    "pam",
    "ari",
    "discretize_scores",
    "Labeling",
]

__version__ = "0.1.0"
