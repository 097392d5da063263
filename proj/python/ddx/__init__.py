"""Explainable DoS flow analysis: feature extraction, pipeline evolution,
decision trees and Shapley attributions, backed by the C++ core."""

from ._core import (
    DecisionTree,
    Pipeline,
    class_rates,
    confusion_matrix,
    cross_val_score,
    entropy,
    evolve_pipeline,
    exact_shapley,
    extract_features,
    feature_names,
    feature_schema,
    generate_packets,
    pipeline_shapley,
    pr_curve,
    sampled_shapley,
    train_pipeline,
    version,
)

__version__ = version()
__all__ = [
    "DecisionTree",
    "Pipeline",
    "class_rates",
    "confusion_matrix",
    "cross_val_score",
    "entropy",
    "evolve_pipeline",
    "exact_shapley",
    "extract_features",
    "feature_names",
    "feature_schema",
    "generate_packets",
    "pipeline_shapley",
    "pr_curve",
    "sampled_shapley",
    "train_pipeline",
    "version",
]
