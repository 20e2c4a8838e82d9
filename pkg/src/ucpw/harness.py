"""Experiment driver: LOOCV, multi-model benchmarks, homogeneous subsets."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

from . import estimators as est
from . import evaluation as ev
from . import stats
from .domain import DEFAULT_PROFILE, Dataset, WeightProfile
from .errors import ComputationError, DegenerateSeriesError, FoldError, InsufficientDataError, UcpError
from .sizing import ef

REPORT_SCHEMA = "ucpw.report/1"
UNTAGGED = "untagged"


@dataclass(frozen=True)
class BenchmarkConfig:
    models: tuple[str, ...] = est.KINDS
    seed: int = 42
    runs: int = 1000
    alpha: float = 0.05
    profile: WeightProfile = DEFAULT_PROFILE
    exact_baseline: bool = False
    allow_partial: bool = False
    floor: float = est.DEFAULT_FLOOR

    def __post_init__(self):
        models = tuple(self.models)
        object.__setattr__(self, "models", models)
        if not models:
            raise ValueError("model list must be non-empty")
        unknown = [m for m in models if m not in est.KINDS]
        if unknown:
            raise ValueError(f"unknown models {unknown}; expected a subset of {list(est.KINDS)}")
        if len(set(models)) != len(models):
            raise ValueError("model list has duplicates")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.runs < 1 and not self.exact_baseline:
            raise ValueError("runs must be >= 1")


def loocv(dataset: Dataset, kind: str, config: BenchmarkConfig = BenchmarkConfig()) -> ev.PredictionSet:
    """Leave-one-out predictions in dataset order.

    History-based models are refitted on every fold.  A failed fold raises
    :class:`FoldError` unless ``config.allow_partial`` is set, in which case
    it is recorded in ``failures`` and skipped.
    """
    items, failures, floored = [], [], 0
    shared = None if kind in est.HISTORY_KINDS else est.fit(kind)
    for i, rec in enumerate(dataset.records):
        try:
            if shared is None:
                fitted = est.fit(kind, dataset.without(i), config.profile, config.alpha, config.floor)
            else:
                fitted = shared
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", est.ProductivityFloorWarning)
                y_hat = est.estimate(fitted, rec.ucp, rec.env_factors)
            floored += sum(issubclass(w.category, est.ProductivityFloorWarning) for w in caught)
        except (UcpError, ValueError) as exc:
            failures.append((rec.id, f"{type(exc).__name__}: {exc}"))
            continue
        items.append(ev.Prediction(rec.id, rec.effort, y_hat))
    if failures and not config.allow_partial:
        raise FoldError(
            f"{len(failures)} of {len(dataset)} {kind} folds failed; first: {failures[0][1]}", failures
        )
    if not items:
        raise FoldError(f"every {kind} fold failed", failures)
    result = ev.PredictionSet(tuple(items), tuple(failures))
    if floored:
        warnings.warn(f"{kind}: productivity floor applied in {floored} folds", est.ProductivityFloorWarning)
    return result


def _aligned(sets):
    ids = None
    for s in sets.values():
        if ids is None:
            ids = s.ids
        elif s.ids != ids:
            raise ValueError("prediction sets are not aligned on the same projects")


def significance_matrix(prediction_sets: dict[str, ev.PredictionSet], alpha: float = 0.05) -> dict[str, dict[str, float]]:
    """Two-sided Mann-Whitney p-values between the absolute residuals of every model pair."""
    if len(prediction_sets) < 2:
        raise ValueError("need at least 2 models for a significance matrix")
    _aligned(prediction_sets)
    names = list(prediction_sets)
    out = {a: {} for a in names}
    for i, a in enumerate(names):
        for b in names[i:]:
            p = stats.mann_whitney(prediction_sets[a].ae, prediction_sets[b].ae, alpha).p_value
            out[a][b] = out[b][a] = p
    return out


@dataclass(frozen=True)
class ModelResult:
    mae: float
    mbre: float
    mibre: float
    sa_vs_guessing: float | None
    delta_vs_guessing: float | None
    sa_vs_karner: float | None
    delta_vs_karner: float | None

    def to_dict(self):
        return {
            "mae": self.mae,
            "mbre": self.mbre,
            "mibre": self.mibre,
            "sa_vs_guessing": self.sa_vs_guessing,
            "delta_vs_guessing": self.delta_vs_guessing,
            "effect_band": None if self.delta_vs_guessing is None else ev.effect_band(self.delta_vs_guessing),
            "sa_vs_karner": self.sa_vs_karner,
            "delta_vs_karner": self.delta_vs_karner,
        }


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    n: int
    config: BenchmarkConfig
    baseline: ev.GuessingBaseline
    models: dict[str, ModelResult]
    p_values: dict[str, dict[str, float]]
    predictions: dict[str, ev.PredictionSet]
    notes: tuple[str, ...] = ()

    def to_dict(self):
        cfg = self.config
        return {
            "schema": REPORT_SCHEMA,
            "dataset": self.dataset,
            "n": self.n,
            "config": {
                "models": list(cfg.models),
                "seed": cfg.seed,
                "runs": cfg.runs,
                "alpha": cfg.alpha,
                "exact_baseline": cfg.exact_baseline,
                "allow_partial": cfg.allow_partial,
                "floor": cfg.floor,
                "weights": cfg.profile.to_dict(),
            },
            "baseline": self.baseline.to_dict(),
            "models": {m: r.to_dict() for m, r in self.models.items()},
            "p_values": self.p_values,
            "predictions": {
                m: {
                    "items": [
                        {"id": p.id, "actual": p.actual, "predicted": p.predicted, "ae": p.ae}
                        for p in s.items
                    ],
                    "failures": [{"id": i, "reason": why} for i, why in s.failures],
                }
                for m, s in self.predictions.items()
            },
            "notes": list(self.notes),
        }

    def to_json(self):
        return json.dumps(_clean(self.to_dict()), indent=2, allow_nan=False) + "\n"

    def render(self):
        return render_report(self)

    def plot_rows(self, dataset: Dataset):
        """Actual vs estimated productivity per model and project, for scatter plots."""
        ucp = {r.id: r.ucp for r in dataset}
        rows = []
        for m, s in self.predictions.items():
            for p in s.items:
                rows.append({
                    "model": m,
                    "id": p.id,
                    "actual_productivity": p.actual / ucp[p.id],
                    "estimated_productivity": p.predicted / ucp[p.id],
                    "actual_effort": p.actual,
                    "estimated_effort": p.predicted,
                })
        return rows


def _clean(obj):
    # JSON has no NaN; undefined quantities become null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def benchmark(dataset: Dataset, config: BenchmarkConfig = BenchmarkConfig()) -> EvaluationReport:
    """Run every configured model under LOOCV and compare against random
    guessing and against Karner's fixed productivity."""
    notes = []
    sets = {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", est.ProductivityFloorWarning)
        for kind in config.models:
            sets[kind] = loocv(dataset, kind, config)
    notes.extend(str(w.message) for w in caught if issubclass(w.category, est.ProductivityFloorWarning))

    baseline = ev.guessing_baseline(dataset.effort, config.runs, config.seed, config.exact_baseline)
    karner = sets["karner"] if "karner" in sets else loocv(dataset, "karner", config)

    results = {}
    for kind, s in sets.items():
        m = ev.mae(s)
        try:
            sa_g = ev.sa(m, baseline)
        except ComputationError as exc:
            sa_g = None
            notes.append(f"{kind}: {exc}")
        try:
            d_g = ev.effect_size(m, baseline)
        except ComputationError as exc:
            d_g = None
            notes.append(f"{kind}: {exc}")
        ids = set(s.ids)
        kp = ev.PredictionSet(tuple(p for p in karner.items if p.id in ids))
        try:
            sa_k, d_k = ev.sa_vs_model(m, kp)
        except ComputationError as exc:
            sa_k = d_k = None
            notes.append(f"{kind}: {exc}")
        results[kind] = ModelResult(
            mae=m,
            mbre=ev.mbre(s, skip_invalid=config.allow_partial),
            mibre=ev.mibre(s, skip_invalid=config.allow_partial),
            sa_vs_guessing=sa_g,
            delta_vs_guessing=d_g,
            sa_vs_karner=sa_k,
            delta_vs_karner=d_k,
        )

    p_values = {}
    if len(sets) >= 2:
        common = set.intersection(*(set(s.ids) for s in sets.values()))
        trimmed = {
            k: ev.PredictionSet(tuple(p for p in s.items if p.id in common)) for k, s in sets.items()
        }
        p_values = significance_matrix(trimmed, config.alpha)
    return EvaluationReport(
        dataset=dataset.name,
        n=len(dataset),
        config=config,
        baseline=baseline,
        models=results,
        p_values=p_values,
        predictions=sets,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class Subset:
    value: str
    dataset: Dataset
    below_minimum: bool


def split_homogeneous(dataset: Dataset, key: str, min_fraction: float = 0.5) -> list[Subset]:
    """One sub-dataset per distinct value of tag ``key``, in first-seen order.

    Records without the tag land in an ``untagged`` subset.  Subsets smaller
    than ``min_fraction`` of the parent are flagged, not dropped.
    """
    groups: dict[str, list] = {}
    for r in dataset:
        groups.setdefault(r.tags.get(key, UNTAGGED), []).append(r)
    out = []
    for value, records in groups.items():
        name = dataset.name if len(groups) == 1 else f"{dataset.name}[{key}={value}]"
        out.append(Subset(value, Dataset(name, tuple(records)), len(records) < min_fraction * len(dataset)))
    return out


@dataclass(frozen=True)
class DatasetDescription:
    dataset: str
    variables: dict[str, stats.DescriptiveStats]
    correlations: dict[str, stats.TestResult | None]
    notes: tuple[str, ...] = ()

    def to_dict(self):
        return _clean({
            "dataset": self.dataset,
            "variables": {k: v.to_dict() for k, v in self.variables.items()},
            "correlations": {k: (None if v is None else v.to_dict()) for k, v in self.correlations.items()},
            "notes": list(self.notes),
        })


def describe_dataset(dataset: Dataset, profile: WeightProfile = DEFAULT_PROFILE) -> DatasetDescription:
    """Descriptive statistics of UCP, effort and productivity, and Pearson
    correlations of productivity against EF, UCP and effort.

    Correlations against a constant series are reported as ``None`` with a note.
    """
    if len(dataset) < 3:
        raise InsufficientDataError(f"describe needs at least 3 projects, got {len(dataset)}")
    prod = dataset.productivity
    variables = {
        "ucp": stats.describe(dataset.ucp),
        "effort": stats.describe(dataset.effort),
        "productivity": stats.describe(prod),
    }
    others = {
        "ef": [ef(r.env_factors, profile) for r in dataset],
        "ucp": dataset.ucp,
        "effort": dataset.effort,
    }
    correlations, notes = {}, []
    for name, xs in others.items():
        try:
            correlations[name] = stats.pearson(xs, prod)
        except DegenerateSeriesError as exc:
            correlations[name] = None
            notes.append(f"productivity vs {name}: {exc}")
    return DatasetDescription(dataset.name, variables, correlations, tuple(notes))


# -- plain-text rendering ----------------------------------------------------

def _fmt(v, digits=2):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "-"
    return f"{v:.{digits}f}"


def _table(header, rows):
    cols = [header] + rows
    widths = [max(len(str(r[i])) for r in cols) for i in range(len(header))]
    lines = ["  ".join(str(c).rjust(w) if j else str(c).ljust(w) for j, (c, w) in enumerate(zip(r, widths)))
             for r in cols]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_report(report: EvaluationReport) -> str:
    names = list(report.models)
    label = [est.DISPLAY_NAMES[m] for m in names]
    res = report.models
    b = report.baseline
    out = [
        f"Dataset: {report.dataset} (n={report.n})",
        f"Guessing baseline: MAE_p0={_fmt(b.mae_p0)} SD_p0={_fmt(b.sd_p0)} "
        + ("(exact)" if b.exact else f"(runs={b.runs}, seed={b.seed})"),
        "",
        "SA and effect size vs random guessing",
        _table(["", *label], [
            ["SA", *(_fmt(res[m].sa_vs_guessing) for m in names)],
            ["Delta", *(_fmt(res[m].delta_vs_guessing) for m in names)],
        ]),
        "",
        "SA and effect size vs Karner",
        _table(["", *label], [
            ["SA", *(_fmt(res[m].sa_vs_karner) for m in names)],
            ["Delta", *(_fmt(res[m].delta_vs_karner) for m in names)],
        ]),
        "",
        "Accuracy",
        _table(["", *label], [
            ["MAE", *(_fmt(res[m].mae, 1) for m in names)],
            ["MBRE", *(_fmt(res[m].mbre) for m in names)],
            ["MIBRE", *(_fmt(res[m].mibre) for m in names)],
        ]),
    ]
    if report.p_values:
        rows = []
        for i, a in enumerate(names):
            for bname in names[i + 1:]:
                rows.append([f"{est.DISPLAY_NAMES[a]} vs. {est.DISPLAY_NAMES[bname]}",
                             _fmt(report.p_values[a][bname])])
        out += ["", "Mann-Whitney p-values on absolute residuals", _table(["pair", "p"], rows)]
    if report.notes:
        out += ["", "Notes:"] + [f"  {n}" for n in report.notes]
    return "\n".join(out) + "\n"


def render_description(desc: DatasetDescription) -> str:
    rows = []
    for name, d in desc.variables.items():
        rows.append([name, _fmt(d.mean), _fmt(d.stdev), _fmt(d.min), _fmt(d.median), _fmt(d.max),
                     _fmt(d.skewness), _fmt(d.kurtosis)])
    corr = [[f"productivity vs {k}",
             _fmt(None if v is None else v.statistic, 3),
             _fmt(None if v is None else v.p_value, 3)] for k, v in desc.correlations.items()]
    out = [
        f"Dataset: {desc.dataset} (n={desc.variables['ucp'].n})",
        _table(["Variable", "Mean", "StDev", "Min", "Median", "Max", "Skewness", "Kurtosis"], rows),
        "",
        _table(["Pearson", "r", "p-value"], corr),
    ]
    if desc.notes:
        out += ["", "Notes:"] + [f"  {n}" for n in desc.notes]
    return "\n".join(out) + "\n"
