"""Intrinsic and extrinsic evaluation of embeddings."""

from .clustering import EvaluationError, KMeansResult, Projection, kmeans, project_2d, purity, write_projection
from .metrics import PROBE_SPEC, LinearProbe, MacroMetrics, macro_metrics, metrics_from_confusion, train_classifier
from .report import (
    ComparisonReport,
    ExtrinsicReport,
    IntrinsicReport,
    LabeledSet,
    average_purity,
    compare_models,
    deviation,
    extrinsic_eval,
    intrinsic_eval,
    load_labeled_set,
    render_extrinsic,
    render_intrinsic,
    winners,
)

__all__ = [
    "EvaluationError", "KMeansResult", "Projection", "kmeans", "project_2d", "purity", "write_projection",
    "PROBE_SPEC", "LinearProbe", "MacroMetrics", "macro_metrics", "metrics_from_confusion", "train_classifier",
    "ComparisonReport", "ExtrinsicReport", "IntrinsicReport", "LabeledSet", "average_purity", "compare_models",
    "deviation", "extrinsic_eval", "intrinsic_eval", "load_labeled_set", "render_extrinsic", "render_intrinsic",
    "winners",
]
