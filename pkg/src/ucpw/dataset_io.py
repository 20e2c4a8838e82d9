"""CSV datasets and weight-profile documents.

CSV layout (comma separated, first row is the header, names matched
case-insensitively after trimming):

* required: ``id, ucp, effort, e1..e8``
* optional: ``simple_actors, average_actors, complex_actors``,
  ``simple_uc, average_uc, complex_uc``, ``t1..t13``
* anything else is kept as a string tag; an empty cell means "no tag".

A ``productivity`` column is ignored with a warning since productivity is
always derived from effort and ucp.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path

from .domain import N_ENV, N_TECH, Dataset, ProjectRecord, WeightProfile, validate_record
from .errors import DataError, EmptyDatasetError, SchemaError

ENV_COLS = tuple(f"e{i}" for i in range(1, N_ENV + 1))
TECH_COLS = tuple(f"t{i}" for i in range(1, N_TECH + 1))
ACTOR_COLS = ("simple_actors", "average_actors", "complex_actors")
UC_COLS = ("simple_uc", "average_uc", "complex_uc")
REQUIRED = ("id", "ucp", "effort") + ENV_COLS
KNOWN = set(REQUIRED) | set(TECH_COLS) | set(ACTOR_COLS) | set(UC_COLS) | {"productivity"}


def _number(text, col):
    text = text.strip()
    try:
        v = float(text)
    except ValueError:
        raise DataError(f"{col}: {text!r} is not a number") from None
    if not math.isfinite(v):
        raise DataError(f"{col}: {text!r} is not finite")
    return v


def _count(text, col):
    v = _number(text, col)
    if v != int(v):
        raise DataError(f"{col}: {text!r} is not an integer count")
    return int(v)


def _group(row, cols, conv):
    cells = [row[c].strip() for c in cols if c in row]
    if len(cells) != len(cols) or all(not c for c in cells):
        return None
    if any(not c for c in cells):
        missing = [c for c in cols if not row.get(c, "").strip()]
        raise DataError(f"incomplete group, missing {', '.join(missing)}")
    return tuple(conv(row[c], c) for c in cols)


def _header(fields):
    norm = [f.strip().lower() for f in fields]
    seen = set()
    for f in norm:
        if f in seen:
            raise SchemaError(f"duplicate column {f!r}")
        seen.add(f)
    for col in REQUIRED:
        if col not in seen:
            raise SchemaError(f"missing required column {col!r}")
    for group in (TECH_COLS, ACTOR_COLS, UC_COLS):
        present = [c for c in group if c in seen]
        if present and len(present) != len(group):
            missing = [c for c in group if c not in seen]
            raise SchemaError(f"partial column group, missing {', '.join(missing)}")
    return norm, [f.strip() for f in fields]


def _read_text(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8-sig")
    if isinstance(source, (str, os.PathLike)):
        try:
            return Path(source).read_bytes().decode("utf-8-sig")
        except OSError:
            raise
        except UnicodeDecodeError as exc:
            raise DataError(f"{source}: not valid UTF-8") from exc
    data = source.read()
    return data.decode("utf-8-sig") if isinstance(data, bytes) else data


def parse_dataset(source, name: str | None = None) -> tuple[Dataset, list[str]]:
    """Parse a CSV dataset from a path, bytes or file object.

    Returns the dataset and per-row warnings.  Rows that break a record
    invariant are rejected (with their 1-based file line number and reason)
    rather than aborting the whole parse.
    """
    if name is None:
        name = Path(source).stem if isinstance(source, (str, os.PathLike)) else "dataset"
    reader = csv.reader(io.StringIO(_read_text(source), newline=""), strict=True)
    try:
        raw_header = next(reader)
    except StopIteration:
        raise SchemaError("empty file: no header row") from None
    except csv.Error as exc:
        raise DataError(f"malformed CSV header: {exc}") from None
    norm, original = _header(raw_header)
    tag_cols = [(n, o) for n, o in zip(norm, original) if n not in KNOWN]

    warnings = []
    if "productivity" in norm:
        warnings.append("column 'productivity' ignored: productivity is derived as effort/ucp")
    records, seen = [], set()
    line = 1
    while True:
        try:
            cells = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise DataError(f"line {reader.line_num}: malformed CSV: {exc}") from None
        line = reader.line_num
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(norm):
            warnings.append(f"row {line}: rejected: expected {len(norm)} cells, got {len(cells)}")
            continue
        row = dict(zip(norm, cells))
        try:
            rid = row["id"].strip()
            if rid in seen:
                raise DataError(f"duplicate id {rid!r}")
            rec = ProjectRecord(
                id=rid,
                ucp=_number(row["ucp"], "ucp"),
                effort=_number(row["effort"], "effort"),
                env_factors=tuple(_number(row[c], c) for c in ENV_COLS),
                tech_factors=_group(row, TECH_COLS, _number),
                actor_counts=_group(row, ACTOR_COLS, _count),
                usecase_counts=_group(row, UC_COLS, _count),
                tags={o: row[n] for n, o in tag_cols if row[n] != ""},
            )
        except DataError as exc:
            warnings.append(f"row {line}: rejected: {exc}")
            continue
        problems = validate_record(rec)
        if problems:
            warnings.append(f"row {line}: rejected: {'; '.join(problems)}")
            continue
        seen.add(rid)
        records.append(rec)
    if not records:
        raise EmptyDatasetError(f"{name}: no valid rows")
    return Dataset(name, tuple(records)), warnings


def load_dataset(source, name: str | None = None) -> Dataset:
    return parse_dataset(source, name)[0]


def _cell(v):
    return repr(float(v))


def dataset_rows(dataset: Dataset):
    """Header and rows for ``dataset`` in the CSV layout."""
    recs = dataset.records
    has_tech = any(r.tech_factors is not None for r in recs)
    has_actors = any(r.actor_counts is not None for r in recs)
    has_uc = any(r.usecase_counts is not None for r in recs)
    tag_keys = dataset.tag_keys()
    header = list(REQUIRED)
    if has_actors:
        header += ACTOR_COLS
    if has_uc:
        header += UC_COLS
    if has_tech:
        header += TECH_COLS
    header += tag_keys
    rows = []
    for r in recs:
        row = [r.id, _cell(r.ucp), _cell(r.effort)] + [_cell(v) for v in r.env_factors]
        if has_actors:
            row += [str(c) for c in r.actor_counts] if r.actor_counts else [""] * 3
        if has_uc:
            row += [str(c) for c in r.usecase_counts] if r.usecase_counts else [""] * 3
        if has_tech:
            row += [_cell(v) for v in r.tech_factors] if r.tech_factors else [""] * N_TECH
        row += [r.tags.get(k, "") for k in tag_keys]
        rows.append(row)
    return header, rows


def write_dataset(dataset: Dataset, path) -> None:
    """Write ``dataset`` so that ``parse_dataset`` reads back an equal dataset.

    Reals are written with ``repr``, the shortest text that round-trips exactly.
    """
    header, rows = dataset_rows(dataset)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


PROFILE_KEYS = ("actor_weights", "usecase_weights", "tech_weights", "env_weights")


def weight_profile_from_dict(doc) -> WeightProfile:
    if not isinstance(doc, dict):
        raise DataError("weight profile must be a JSON object")
    unknown = set(doc) - set(PROFILE_KEYS)
    if unknown:
        raise DataError(f"unknown weight-profile keys: {', '.join(sorted(unknown))}")
    kwargs = {}
    for key in PROFILE_KEYS:
        if key in doc:
            value = doc[key]
            if not isinstance(value, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
                raise DataError(f"{key} must be a list of numbers")
            kwargs[key] = tuple(value)
    return WeightProfile(**kwargs)


def load_weight_profile(path) -> WeightProfile:
    """Read a JSON weight profile; absent keys keep their default weights.

    An empty file yields the default profile.
    """
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return WeightProfile()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: malformed weight profile: {exc}") from None
    return weight_profile_from_dict(doc)
