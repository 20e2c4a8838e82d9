"""Productivity-based effort models.

Every model turns a size in UCP into effort by way of a productivity value
(person-hours per UCP).  Karner and Schneider & Winters need no history;
Nassif, regression-to-the-mean (R2M), naive and the EFactor regression are
fitted on a training dataset first.

``fit(kind, training)`` and ``estimate(fitted, ucp, env_factors)`` give a
uniform interface over all six kinds.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import stats
from .domain import DEFAULT_PROFILE, N_ENV, Dataset, ProjectRecord, WeightProfile
from .errors import DataError, DegenerateSeriesError, DomainError, FitError, InsufficientDataError
from .sizing import efactor

KINDS = ("karner", "sw", "nassif", "r2m", "naive", "efreg")
HISTORY_KINDS = ("nassif", "r2m", "naive", "efreg")
DISPLAY_NAMES = {
    "karner": "Karner",
    "sw": "S&W",
    "nassif": "Nassif",
    "r2m": "R2M",
    "naive": "Naive",
    "efreg": "EFReg",
}

KARNER_PR = 20.0
SW_LEVELS = (20.0, 28.0, 36.0)
NASSIF_LEVELS = (0.4, 0.7, 1.0, 1.3)
DEFAULT_FLOOR = 1.0


class ProductivityFloorWarning(UserWarning):
    """The EFactor regression predicted a productivity below the floor."""


@dataclass(frozen=True)
class FittedEstimator:
    """A model ready to estimate.

    ``params`` holds the learned values by kind: ``pr`` (karner, naive),
    ``alpha``/``beta`` (nassif), ``h``/``r`` (r2m), ``intercept``/``slope``/
    ``adj_r_squared``/``floor`` (efreg).  R2M keeps its training records for
    the nearest-neighbour search.
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    training: tuple[ProjectRecord, ...] = ()
    profile: WeightProfile = DEFAULT_PROFILE

    def to_dict(self):
        doc = {"kind": self.kind, "params": dict(self.params)}
        if self.kind in ("nassif", "efreg"):
            doc["env_weights"] = list(self.profile.env_weights)
        if self.training:
            doc["training"] = [
                {"id": r.id, "ucp": r.ucp, "effort": r.effort, "env_factors": list(r.env_factors)}
                for r in self.training
            ]
        return doc

    @classmethod
    def from_dict(cls, doc):
        kind = doc.get("kind")
        if kind not in KINDS:
            raise DataError(f"unknown estimator kind {kind!r}")
        profile = DEFAULT_PROFILE
        if "env_weights" in doc:
            profile = WeightProfile(env_weights=tuple(doc["env_weights"]))
        training = tuple(
            ProjectRecord(id=t["id"], ucp=t["ucp"], effort=t["effort"], env_factors=t["env_factors"])
            for t in doc.get("training", ())
        )
        return cls(kind, dict(doc.get("params", {})), training, profile)


def _check_size(ucp, pr=1.0):
    if not (ucp > 0 and math.isfinite(ucp)):
        raise DomainError(f"ucp must be > 0, got {ucp!r}")
    if not (pr > 0 and math.isfinite(pr)):
        raise DomainError(f"productivity must be > 0, got {pr!r}")


def _env(env_factors):
    env = tuple(float(v) for v in env_factors)
    if len(env) != N_ENV:
        raise DataError(f"env_factors needs {N_ENV} ratings, got {len(env)}")
    return env


# -- Karner ------------------------------------------------------------------

def karner_estimate(ucp: float, pr: float = KARNER_PR) -> float:
    _check_size(ucp, pr)
    return pr * ucp


# -- Schneider & Winters -----------------------------------------------------

def sw_total_count(env_factors) -> int:
    """Unfavourable factors: env_1..env_6 rated below 3 plus env_7, env_8 above 3."""
    env = _env(env_factors)
    return sum(v < 3 for v in env[:6]) + sum(v > 3 for v in env[6:])


def sw_productivity(env_factors) -> float:
    count = sw_total_count(env_factors)
    if count <= 2:
        return SW_LEVELS[0]
    if count <= 4:
        return SW_LEVELS[1]
    return SW_LEVELS[2]


def sw_estimate(ucp: float, env_factors) -> float:
    _check_size(ucp)
    return sw_productivity(env_factors) * ucp


# -- Nassif ------------------------------------------------------------------

def nassif_productivity_factor(prod_sum: float) -> float:
    """Crisp fuzzy-rule output; bands are half-open on the right."""
    if prod_sum < 0:
        return NASSIF_LEVELS[0]
    if prod_sum < 10:
        return NASSIF_LEVELS[1]
    if prod_sum < 20:
        return NASSIF_LEVELS[2]
    return NASSIF_LEVELS[3]


def nassif_fit(training: Dataset, profile: WeightProfile = DEFAULT_PROFILE) -> FittedEstimator:
    """Fit alpha and beta of effort = (alpha / P) * ucp**beta.

    P is fixed per project by the fuzzy rules, so effort*P = alpha*ucp**beta
    and a log-log least-squares line gives ln(alpha) and beta.
    """
    if len(training) < 3:
        raise FitError(f"nassif needs at least 3 training projects, got {len(training)}")
    log_ucp, log_target = [], []
    for r in training:
        if r.ucp <= 0 or r.effort <= 0:
            raise FitError(f"project {r.id!r} has non-positive ucp or effort")
        p = nassif_productivity_factor(efactor(r.env_factors, profile))
        log_ucp.append(math.log(r.ucp))
        log_target.append(math.log(r.effort * p))
    try:
        line = stats.ols_simple(log_ucp, log_target)
    except DegenerateSeriesError as exc:
        raise FitError("nassif fit is singular: all training projects share one ucp") from exc
    return FittedEstimator(
        "nassif", {"alpha": math.exp(line.intercept), "beta": line.slope}, profile=profile
    )


def nassif_estimate(fit: FittedEstimator, ucp: float, env_factors) -> float:
    _check_size(ucp)
    p = nassif_productivity_factor(efactor(env_factors, fit.profile))
    return fit.params["alpha"] / p * ucp ** fit.params["beta"]


# -- Regression to the mean --------------------------------------------------

def nearest_index(records, env_factors, exclude: int | None = None) -> int:
    """Index of the record closest in env-rating space (Euclidean).

    Ties go to the lowest index.
    """
    target = np.asarray(_env(env_factors))
    best, best_d = -1, math.inf
    for i, r in enumerate(records):
        if i == exclude:
            continue
        d = float(np.sum((np.asarray(r.env_factors) - target) ** 2))
        if d < best_d:
            best, best_d = i, d
    if best < 0:
        raise FitError("no training project available for the analogy search")
    return best


def r2m_fit(training: Dataset) -> FittedEstimator:
    """h is mean training productivity; r correlates each training project's
    own productivity with that of its nearest other training project.

    r is clamped to [0, 1] and is 0 when either series is constant.
    """
    n = len(training)
    if n < 3:
        raise FitError(f"r2m needs at least 3 training projects, got {n}")
    records = training.records
    prods = [r.productivity for r in records]
    analog = [prods[nearest_index(records, r.env_factors, exclude=i)] for i, r in enumerate(records)]
    try:
        r = stats.pearson(analog, prods).statistic
    except DegenerateSeriesError:
        r = 0.0
    r = min(1.0, max(0.0, r))
    return FittedEstimator("r2m", {"h": float(np.mean(prods)), "r": r}, training=records)


def r2m_adjusted_productivity(pdr_c: float, h: float, r: float) -> float:
    return pdr_c + (h - pdr_c) * (1.0 - r)


def r2m_estimate(fit: FittedEstimator, ucp: float, env_factors) -> float:
    _check_size(ucp)
    if not fit.training:
        raise FitError("r2m estimator has no training projects")
    pdr_c = fit.training[nearest_index(fit.training, env_factors)].productivity
    return r2m_adjusted_productivity(pdr_c, fit.params["h"], fit.params["r"]) * ucp


# -- Naive -------------------------------------------------------------------

def naive_fit(training: Dataset, alpha: float = 0.05) -> FittedEstimator:
    """Mean training productivity if it passes the KS normality test, else the median.

    With fewer than 4 projects the normality test cannot run and the median is used.
    """
    prods = training.productivity
    if not prods:
        raise FitError("naive needs at least one training project")
    used_mean = False
    if len(prods) >= 4:
        used_mean = not stats.ks_normality(prods, alpha).reject
    pr = float(np.mean(prods)) if used_mean else float(np.median(prods))
    return FittedEstimator("naive", {"pr": pr, "used_mean": used_mean})


def naive_estimate(fit: FittedEstimator, ucp: float) -> float:
    return karner_estimate(ucp, fit.params["pr"])


# -- EFactor regression ------------------------------------------------------

def efreg_fit(
    training: Dataset, profile: WeightProfile = DEFAULT_PROFILE, floor: float = DEFAULT_FLOOR
) -> FittedEstimator:
    """Least-squares productivity = intercept + slope * EFactor over the training set."""
    if len(training) < 3:
        raise FitError(f"efreg needs at least 3 training projects, got {len(training)}")
    xs = [efactor(r.env_factors, profile) for r in training]
    try:
        line = stats.ols_simple(xs, training.productivity)
    except DegenerateSeriesError as exc:
        raise FitError("efreg fit is singular: EFactor is constant over the training set") from exc
    return FittedEstimator(
        "efreg",
        {
            "intercept": line.intercept,
            "slope": line.slope,
            "adj_r_squared": line.adj_r_squared,
            "floor": float(floor),
        },
        profile=profile,
    )


def efreg_productivity(fit: FittedEstimator, env_factors) -> tuple[float, bool]:
    """Predicted productivity after flooring, and whether the floor applied."""
    raw = fit.params["intercept"] + fit.params["slope"] * efactor(env_factors, fit.profile)
    floor = fit.params.get("floor", DEFAULT_FLOOR)
    if raw < floor:
        return floor, True
    return raw, False


def efreg_estimate(fit: FittedEstimator, ucp: float, env_factors) -> float:
    """Effort from the regressed productivity.

    Issues :class:`ProductivityFloorWarning` when the regression output falls
    below the floor and the floor is used instead.
    """
    _check_size(ucp)
    pr, floored = efreg_productivity(fit, env_factors)
    if floored:
        warnings.warn(
            f"regressed productivity below floor {pr}; floor used",
            ProductivityFloorWarning,
            stacklevel=2,
        )
    return pr * ucp


# -- uniform interface -------------------------------------------------------

def fit(
    kind: str,
    training: Dataset | None = None,
    profile: WeightProfile = DEFAULT_PROFILE,
    alpha: float = 0.05,
    floor: float = DEFAULT_FLOOR,
) -> FittedEstimator:
    if kind not in KINDS:
        raise ValueError(f"unknown model {kind!r}; expected one of {', '.join(KINDS)}")
    if kind == "karner":
        return FittedEstimator("karner", {"pr": KARNER_PR})
    if kind == "sw":
        return FittedEstimator("sw", {"levels": list(SW_LEVELS)})
    if training is None:
        raise InsufficientDataError(f"model {kind!r} needs a training dataset")
    if kind == "nassif":
        return nassif_fit(training, profile)
    if kind == "r2m":
        return r2m_fit(training)
    if kind == "naive":
        return naive_fit(training, alpha)
    return efreg_fit(training, profile, floor)


def estimate(fitted: FittedEstimator, ucp: float, env_factors=None) -> float:
    kind = fitted.kind
    if kind in ("karner", "naive"):
        return karner_estimate(ucp, fitted.params["pr"])
    if env_factors is None:
        raise DataError(f"model {kind!r} needs the 8 environmental ratings")
    if kind == "sw":
        return sw_estimate(ucp, env_factors)
    if kind == "nassif":
        return nassif_estimate(fitted, ucp, env_factors)
    if kind == "r2m":
        return r2m_estimate(fitted, ucp, env_factors)
    if kind == "efreg":
        return efreg_estimate(fitted, ucp, env_factors)
    raise ValueError(f"unknown model {kind!r}")
