"""Accuracy metrics and baseline-relative validation (SA and effect size)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, InsufficientDataError, MetricDomainError

EFFECT_BANDS = ((0.8, "large"), (0.5, "medium"), (0.2, "small"))


@dataclass(frozen=True)
class Prediction:
    id: str
    actual: float
    predicted: float

    @property
    def ae(self) -> float:
        return abs(self.actual - self.predicted)


@dataclass(frozen=True)
class PredictionSet:
    """Ordered predictions for one model.

    ``failures`` holds (project id, reason) for LOOCV folds that could not be
    fitted; those projects have no entry in ``items``.
    """

    items: tuple[Prediction, ...]
    failures: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_lists(cls, actuals, predicted, ids=None):
        actuals, predicted = list(actuals), list(predicted)
        if len(actuals) != len(predicted):
            raise ValueError("actuals and predictions differ in length")
        ids = list(ids) if ids is not None else [str(i) for i in range(len(actuals))]
        return cls(tuple(Prediction(i, float(a), float(p)) for i, a, p in zip(ids, actuals, predicted)))

    def __len__(self):
        return len(self.items)

    @property
    def ids(self):
        return [p.id for p in self.items]

    @property
    def actuals(self):
        return np.array([p.actual for p in self.items])

    @property
    def predicted(self):
        return np.array([p.predicted for p in self.items])

    @property
    def ae(self):
        return np.abs(self.actuals - self.predicted)


def _nonempty(p: PredictionSet):
    if len(p) == 0:
        raise InsufficientDataError("empty prediction set")


def mae(p: PredictionSet) -> float:
    _nonempty(p)
    return float(np.mean(p.ae))


def _balanced(p: PredictionSet, pick, skip_invalid: bool) -> float:
    _nonempty(p)
    y, yhat = p.actuals, p.predicted
    bad = (y <= 0) | (yhat <= 0)
    if bad.any():
        if not skip_invalid:
            ids = [p.items[i].id for i in np.flatnonzero(bad)]
            raise MetricDomainError(f"non-positive actual or prediction for {ids}")
        y, yhat = y[~bad], yhat[~bad]
        if y.size == 0:
            raise MetricDomainError("no valid items left after excluding non-positive values")
    return float(np.mean(np.abs(y - yhat) / pick(y, yhat)))


def mbre(p: PredictionSet, skip_invalid: bool = False) -> float:
    """Mean balanced relative error: AE over min(actual, predicted)."""
    return _balanced(p, np.minimum, skip_invalid)


def mibre(p: PredictionSet, skip_invalid: bool = False) -> float:
    """Mean inverted balanced relative error: AE over max(actual, predicted)."""
    return _balanced(p, np.maximum, skip_invalid)


def mmre(p: PredictionSet) -> float:
    """Mean magnitude of relative error, for comparison studies only."""
    _nonempty(p)
    return float(np.mean(p.ae / p.actuals))


@dataclass(frozen=True)
class GuessingBaseline:
    mae_p0: float
    sd_p0: float
    runs: int
    seed: int | None
    exact: bool

    def to_dict(self):
        return {"mae_p0": self.mae_p0, "sd_p0": self.sd_p0, "runs": self.runs,
                "seed": self.seed, "exact": self.exact}


def _pairwise_abs(y):
    return np.abs(y[:, None] - y[None, :])


def guessing_baseline(actuals, runs: int = 1000, seed: int = 42, exact: bool = False) -> GuessingBaseline:
    """Random-guessing baseline: each target is predicted by the actual value
    of a uniformly drawn other project.

    In Monte Carlo mode ``mae_p0`` and ``sd_p0`` are the mean and sample
    stdev of the per-run MAEs.  Exact mode enumerates the expectation and
    derives ``sd_p0`` from the per-target AE variances, treating targets as
    independent, so the two modes agree as runs grow.
    """
    y = np.asarray(actuals, dtype=float)
    n = y.size
    if n < 2:
        raise InsufficientDataError(f"guessing baseline needs at least 2 actuals, got {n}")
    if exact:
        d = _pairwise_abs(y)
        mean_t = d.sum(axis=1) / (n - 1)
        sq_t = (d ** 2).sum(axis=1) / (n - 1)
        var_t = np.maximum(sq_t - mean_t ** 2, 0.0)
        return GuessingBaseline(float(mean_t.mean()), float(math.sqrt(var_t.sum()) / n), 0, None, True)
    if runs < 1:
        raise ValueError("runs must be >= 1")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, n - 1, size=(runs, n))
    # skip the target itself: indices >= t shift up by one
    picks = draws + (draws >= np.arange(n))
    run_mae = np.abs(y[picks] - y).mean(axis=1)
    sd = float(run_mae.std(ddof=1)) if runs > 1 else 0.0
    return GuessingBaseline(float(run_mae.mean()), sd, runs, seed, False)


def sa(model_mae: float, baseline: GuessingBaseline) -> float:
    """Standardized accuracy: 1 - MAE / MAE_p0."""
    if baseline.mae_p0 <= 0:
        raise ComputationError("SA undefined: baseline MAE is zero")
    return 1.0 - model_mae / baseline.mae_p0


def effect_size(model_mae: float, baseline: GuessingBaseline) -> float:
    """(MAE_p0 - MAE) / SD_p0, positive when the model beats guessing."""
    if baseline.sd_p0 <= 0:
        raise ComputationError("effect size undefined: baseline stdev is zero")
    return (baseline.mae_p0 - model_mae) / baseline.sd_p0


def effect_band(delta: float) -> str:
    """Magnitude label using the 0.2 / 0.5 / 0.8 convention."""
    for cut, label in EFFECT_BANDS:
        if abs(delta) >= cut:
            return label
    return "negligible"


def sa_vs_model(model_mae: float, baseline_predictions: PredictionSet) -> tuple[float, float | None]:
    """SA and effect size against another model's predictions instead of guessing.

    The effect size uses the stdev of the baseline model's absolute errors;
    it is ``None`` when those errors are all equal.
    """
    base_mae = mae(baseline_predictions)
    if base_mae <= 0:
        raise ComputationError("baseline model is exact; SA against it is undefined")
    ae = baseline_predictions.ae
    sd = float(ae.std(ddof=1)) if ae.size > 1 else 0.0
    delta = (base_mae - model_mae) / sd if sd > 0 else None
    return 1.0 - model_mae / base_mae, delta
