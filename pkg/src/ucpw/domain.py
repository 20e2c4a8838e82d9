"""Core data model: project records, datasets and weight profiles."""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import DataError, EmptyDatasetError

N_TECH = 13
N_ENV = 8

DEFAULT_ACTOR_WEIGHTS = (1.0, 2.0, 3.0)
DEFAULT_USECASE_WEIGHTS = (5.0, 10.0, 15.0)
DEFAULT_TECH_WEIGHTS = (2.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0)
DEFAULT_ENV_WEIGHTS = (1.5, 0.5, 1.0, 0.5, 1.0, 2.0, -1.0, -1.0)


def _floats(values, name, arity=None):
    out = tuple(float(v) for v in values)
    if arity is not None and len(out) != arity:
        raise DataError(f"{name} needs exactly {arity} values, got {len(out)}")
    return out


@dataclass(frozen=True)
class WeightProfile:
    """Weights applied to actor/use-case counts and factor ratings."""

    actor_weights: tuple[float, ...] = DEFAULT_ACTOR_WEIGHTS
    usecase_weights: tuple[float, ...] = DEFAULT_USECASE_WEIGHTS
    tech_weights: tuple[float, ...] = DEFAULT_TECH_WEIGHTS
    env_weights: tuple[float, ...] = DEFAULT_ENV_WEIGHTS

    def __post_init__(self):
        for name, arity in (
            ("actor_weights", 3),
            ("usecase_weights", 3),
            ("tech_weights", N_TECH),
            ("env_weights", N_ENV),
        ):
            object.__setattr__(self, name, _floats(getattr(self, name), name, arity))

    def to_dict(self):
        return {
            "actor_weights": list(self.actor_weights),
            "usecase_weights": list(self.usecase_weights),
            "tech_weights": list(self.tech_weights),
            "env_weights": list(self.env_weights),
        }


DEFAULT_PROFILE = WeightProfile()


@dataclass(frozen=True)
class ProjectRecord:
    """One completed project.

    Productivity (person-hours per UCP) is not stored; it is always derived
    from ``effort / ucp``.  Construction does not validate; call
    :func:`validate_record` (dataset parsing does this for every row).
    """

    id: str
    ucp: float
    effort: float
    env_factors: tuple[float, ...]
    tech_factors: tuple[float, ...] | None = None
    actor_counts: tuple[int, int, int] | None = None
    usecase_counts: tuple[int, int, int] | None = None
    tags: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "ucp", float(self.ucp))
        object.__setattr__(self, "effort", float(self.effort))
        object.__setattr__(self, "env_factors", tuple(float(v) for v in self.env_factors))
        if self.tech_factors is not None:
            object.__setattr__(self, "tech_factors", tuple(float(v) for v in self.tech_factors))
        for name in ("actor_counts", "usecase_counts"):
            counts = getattr(self, name)
            if counts is not None:
                object.__setattr__(self, name, tuple(int(c) for c in counts))
        object.__setattr__(self, "tags", MappingProxyType(dict(self.tags)))

    @property
    def productivity(self) -> float:
        return self.effort / self.ucp

    def replace(self, **changes) -> ProjectRecord:
        fields = {
            "id": self.id,
            "ucp": self.ucp,
            "effort": self.effort,
            "env_factors": self.env_factors,
            "tech_factors": self.tech_factors,
            "actor_counts": self.actor_counts,
            "usecase_counts": self.usecase_counts,
            "tags": dict(self.tags),
        }
        fields.update(changes)
        return ProjectRecord(**fields)

    def __eq__(self, other):
        if not isinstance(other, ProjectRecord):
            return NotImplemented
        return (
            self.id == other.id
            and self.ucp == other.ucp
            and self.effort == other.effort
            and self.env_factors == other.env_factors
            and self.tech_factors == other.tech_factors
            and self.actor_counts == other.actor_counts
            and self.usecase_counts == other.usecase_counts
            and dict(self.tags) == dict(other.tags)
        )

    def __hash__(self):
        return hash((self.id, self.ucp, self.effort, self.env_factors))


def _check_ratings(values, name, arity, out):
    if len(values) != arity:
        out.append(f"{name} must have {arity} ratings, got {len(values)}")
        return
    for i, v in enumerate(values, start=1):
        if not (math.isfinite(v) and 0.0 <= v <= 5.0):
            out.append(f"{name}[{i}] out of [0,5]")


def validate_record(record: ProjectRecord) -> list[str]:
    """Return invariant violations of ``record``; an empty list means valid.

    Factor indices in messages are 1-based (``env_factors[3]`` is env_3).
    """
    out = []
    if not record.id:
        out.append("id must be non-empty")
    for name in ("ucp", "effort"):
        v = getattr(record, name)
        if not (math.isfinite(v) and v > 0):
            out.append(f"{name} must be > 0, got {v!r}")
    _check_ratings(record.env_factors, "env_factors", N_ENV, out)
    if record.tech_factors is not None:
        _check_ratings(record.tech_factors, "tech_factors", N_TECH, out)
    for name in ("actor_counts", "usecase_counts"):
        counts = getattr(record, name)
        if counts is None:
            continue
        if len(counts) != 3:
            out.append(f"{name} must be a (simple, average, complex) triple")
        elif any(c < 0 for c in counts):
            out.append(f"{name} must be non-negative")
    if not out and not (math.isfinite(record.productivity) and record.productivity > 0):
        out.append("productivity (effort/ucp) must be finite and > 0")
    return out


@dataclass(frozen=True)
class Dataset:
    """Named, ordered collection of projects.

    Record order matters: nearest-neighbour ties break towards the record
    that comes first.
    """

    name: str
    records: tuple[ProjectRecord, ...]

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        if not records:
            raise EmptyDatasetError(f"dataset {self.name!r} has no records")
        seen = set()
        for r in records:
            if r.id in seen:
                raise DataError(f"duplicate record id {r.id!r} in dataset {self.name!r}")
            seen.add(r.id)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def ucp(self):
        return [r.ucp for r in self.records]

    @property
    def effort(self):
        return [r.effort for r in self.records]

    @property
    def productivity(self):
        return [r.productivity for r in self.records]

    def without(self, index: int) -> Dataset:
        """Copy with the record at ``index`` removed (a LOOCV training fold)."""
        return Dataset(self.name, self.records[:index] + self.records[index + 1:])

    def subset(self, records: Iterable[ProjectRecord], name: str | None = None) -> Dataset:
        return Dataset(name or self.name, tuple(records))

    def tag_keys(self):
        keys = []
        for r in self.records:
            for k in r.tags:
                if k not in keys:
                    keys.append(k)
        return keys
