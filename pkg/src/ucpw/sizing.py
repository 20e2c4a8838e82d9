"""Use Case Points size: UAW, UUC, TCF, EF and their product."""
from __future__ import annotations

from dataclasses import dataclass

from .domain import DEFAULT_PROFILE, N_ENV, N_TECH, ProjectRecord, WeightProfile
from .errors import DataError, DomainError

SIMPLE, AVERAGE, COMPLEX = "simple", "average", "complex"


@dataclass(frozen=True)
class SizeBreakdown:
    uaw: float
    uuc: float
    tcf: float
    ef: float
    ucp: float

    def to_dict(self):
        return {"uaw": self.uaw, "uuc": self.uuc, "tcf": self.tcf, "ef": self.ef, "ucp": self.ucp}


def _weighted(values, weights, name, arity):
    values = tuple(float(v) for v in values)
    if len(values) != arity:
        raise DataError(f"{name} needs {arity} values, got {len(values)}")
    return sum(v * w for v, w in zip(values, weights))


def _counts(counts, name):
    counts = tuple(counts)
    if len(counts) != 3:
        raise DataError(f"{name} needs (simple, average, complex), got {len(counts)} values")
    if any(c < 0 for c in counts):
        raise DomainError(f"{name} must be non-negative")
    return counts


def uaw(actor_counts, profile: WeightProfile = DEFAULT_PROFILE) -> float:
    """Unadjusted actor weight from (simple, average, complex) actor counts."""
    return float(sum(c * w for c, w in zip(_counts(actor_counts, "actor_counts"), profile.actor_weights)))


def uuc(usecase_counts, profile: WeightProfile = DEFAULT_PROFILE) -> float:
    """Unadjusted use-case weight from (simple, average, complex) use-case counts."""
    return float(sum(c * w for c, w in zip(_counts(usecase_counts, "usecase_counts"), profile.usecase_weights)))


def classify_use_case(transactions: int) -> str:
    """Complexity class of a use case: <=3 transactions simple, 4..7 average, else complex."""
    if transactions <= 3:
        return SIMPLE
    if transactions <= 7:
        return AVERAGE
    return COMPLEX


def tcf(tech_factors, profile: WeightProfile = DEFAULT_PROFILE) -> float:
    return 0.6 + 0.01 * _weighted(tech_factors, profile.tech_weights, "tech_factors", N_TECH)


def ef(env_factors, profile: WeightProfile = DEFAULT_PROFILE) -> float:
    return 1.4 - 0.03 * efactor(env_factors, profile)


def efactor(env_factors, profile: WeightProfile = DEFAULT_PROFILE) -> float:
    """Weighted environmental sum, Σ env_i·ew_i.

    Serves both as the input of the Nassif fuzzy productivity rules and as the
    predictor of the environmental-factor regression model.
    """
    return float(_weighted(env_factors, profile.env_weights, "env_factors", N_ENV))


def ucp_size(uaw: float, uuc: float, tcf: float, ef: float) -> SizeBreakdown:
    if uaw < 0 or uuc < 0:
        raise DomainError("uaw and uuc must be non-negative")
    if uaw + uuc <= 0:
        raise DomainError("empty system: uaw + uuc must be > 0")
    if tcf <= 0 or ef <= 0:
        raise DomainError("tcf and ef must be > 0")
    return SizeBreakdown(uaw, uuc, tcf, ef, (uaw + uuc) * tcf * ef)


def size_record(record: ProjectRecord, profile: WeightProfile = DEFAULT_PROFILE) -> SizeBreakdown:
    """Recompute UCP from a record's raw counts and ratings.

    This is a cross-check only; a record's stored ``ucp`` stays authoritative.
    """
    if record.actor_counts is None or record.usecase_counts is None or record.tech_factors is None:
        raise DataError(f"record {record.id!r} lacks raw counts or technical ratings")
    return ucp_size(
        uaw(record.actor_counts, profile),
        uuc(record.usecase_counts, profile),
        tcf(record.tech_factors, profile),
        ef(record.env_factors, profile),
    )
