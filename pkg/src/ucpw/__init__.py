"""Use Case Points effort estimation with productivity-based models."""
from .domain import Dataset, ProjectRecord, WeightProfile, validate_record
from .estimators import FittedEstimator, estimate, fit
from .evaluation import GuessingBaseline, PredictionSet
from .harness import BenchmarkConfig, EvaluationReport, benchmark, loocv

__all__ = [
    "BenchmarkConfig",
    "Dataset",
    "EvaluationReport",
    "FittedEstimator",
    "GuessingBaseline",
    "PredictionSet",
    "ProjectRecord",
    "WeightProfile",
    "benchmark",
    "estimate",
    "fit",
    "loocv",
    "validate_record",
]
