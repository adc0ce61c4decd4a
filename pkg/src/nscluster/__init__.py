"""Certainty-weighted fuzzy clustering with an explicit noise cluster."""

__version__ = "0.1.0"

from .certainty import (CertaintyConfig, CertaintyVector, certainty, in_circle,
                        resolve_eps, step_indicator)
from .dataset import (BOUNDARY_GROUP, OUTLIER_GROUP, DataSet, NormalizationMode,
                      ScatterSpec, gen_scatter, load_csv, normalize, write_csv)
from .evaluation import (ComparisonRecord, EvalReport, FcmConfig, MethodScores,
                         accuracy, compare, fcm_fit)
from .labeling import PointVerdict, classify_points, hard_labels
from .presets import PRESETS, Preset, get_preset
from .optimizer import (NsConfig, NsState, analytic_gradients, cost, fit,
                        lambda_for_point, update_centroids, update_memberships)

__all__ = [
    "BOUNDARY_GROUP", "OUTLIER_GROUP", "CertaintyConfig", "CertaintyVector",
    "ComparisonRecord", "DataSet", "EvalReport", "FcmConfig", "MethodScores",
    "NormalizationMode", "NsConfig", "NsState", "PointVerdict", "Preset", "PRESETS", "ScatterSpec",
    "accuracy", "analytic_gradients", "certainty", "classify_points", "compare",
    "cost", "fcm_fit", "fit", "gen_scatter", "get_preset", "hard_labels", "in_circle",
    "lambda_for_point", "load_csv", "normalize", "resolve_eps", "step_indicator",
    "update_centroids", "update_memberships", "write_csv",
]
