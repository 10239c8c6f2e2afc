"""
Pre-processing services downstream of an external ICA decomposition.
"""

from .clustering import average_link_cluster, retain_consistent_clusters
from .distances import combined_distance, dtw, imed, pairwise_component_distances
from .pipeline import read_components, run_pipeline, save_subject_maps
from .similarity import exclude_outliers, pca_cpv_reduce, rv_coefficient, rv_distance_matrix
from .thresholding import build_subject_maps, fdr_threshold, zscore

__all__ = [
    "average_link_cluster",
    "build_subject_maps",
    "combined_distance",
    "dtw",
    "exclude_outliers",
    "fdr_threshold",
    "imed",
    "pairwise_component_distances",
    "pca_cpv_reduce",
    "read_components",
    "retain_consistent_clusters",
    "run_pipeline",
    "rv_coefficient",
    "rv_distance_matrix",
    "save_subject_maps",
    "zscore",
]
