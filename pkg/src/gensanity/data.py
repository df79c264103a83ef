"""Shared data types: tabular datasets, embedded point sets, seeded RNG streams.

Everything downstream (embedding, metrics, checks) speaks in terms of the
three types defined here.  ``Dataset`` carries raw tabular values plus a
column schema, ``EmbeddedSet`` is a finite float matrix tagged with its role
in a comparison, and ``RandomSource`` hands out independent, reproducible
random generators keyed by a path of labels.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

NUMERICAL = "numerical"
CATEGORICAL = "categorical"

ROLE_REAL = "real"
ROLE_SYNTHETIC = "synthetic"


class SchemaMismatchError(ValueError):
    """Raised when a dataset does not match the schema it is used with."""


@dataclass(frozen=True)
class Column:
    """One column of a tabular dataset.

    ``categories`` is the number of distinct category codes and is required
    for (and only for) categorical columns.  Categorical values are integer
    codes in ``[0, categories)``.
    """

    name: str
    kind: str = NUMERICAL
    categories: int | None = None

    def __post_init__(self):
        if self.kind not in (NUMERICAL, CATEGORICAL):
            raise SchemaMismatchError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if self.categories is None or self.categories < 1:
                raise SchemaMismatchError(
                    f"column {self.name!r}: categorical columns need categories >= 1"
                )
        elif self.categories is not None:
            raise SchemaMismatchError(
                f"column {self.name!r}: numerical columns must not declare categories"
            )


@dataclass(frozen=True)
class Dataset:
    """Raw tabular data: an (n, len(columns)) float array plus its schema.

    Categorical columns store integer codes (as floats, checked integral and
    in range).  Numerical columns must be finite.
    """

    columns: tuple[Column, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2:
            raise SchemaMismatchError("dataset values must be a 2-d array")
        if vals.shape[0] < 1:
            raise SchemaMismatchError("dataset must contain at least one row")
        if vals.shape[1] != len(self.columns):
            raise SchemaMismatchError(
                f"dataset has {vals.shape[1]} columns but schema declares {len(self.columns)}"
            )
        for j, col in enumerate(self.columns):
            colvals = vals[:, j]
            if not np.all(np.isfinite(colvals)):
                raise SchemaMismatchError(f"column {col.name!r} contains non-finite values")
            if col.kind == CATEGORICAL:
                if not np.all(colvals == np.round(colvals)):
                    raise SchemaMismatchError(f"column {col.name!r} has non-integer codes")
                if colvals.min() < 0 or colvals.max() >= col.categories:
                    raise SchemaMismatchError(
                        f"column {col.name!r} has codes outside [0, {col.categories})"
                    )

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class EmbeddedSet:
    """A set of points in embedding space, tagged with its comparison role."""

    points: np.ndarray
    role: str = ROLE_REAL

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        object.__setattr__(self, "points", pts)
        if pts.ndim != 2:
            raise ValueError("embedded points must form a 2-d array")
        if pts.shape[0] < 1:
            raise ValueError("embedded set must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("embedded points must be finite")
        if self.role not in (ROLE_REAL, ROLE_SYNTHETIC):
            raise ValueError(f"unknown role {self.role!r}")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def as_points(data) -> np.ndarray:
    """Coerce an EmbeddedSet or array-like into a validated float matrix."""
    if isinstance(data, EmbeddedSet):
        return data.points
    return EmbeddedSet(np.atleast_2d(np.asarray(data, dtype=np.float64))).points


@dataclass(frozen=True)
class RandomSource:
    """A splittable, order-independent source of numpy generators.

    Streams are keyed by ``(seed, path)``: two sources with the same key give
    byte-identical draw sequences, and sources with different paths are
    statistically independent regardless of the order in which they are
    created or consumed.  Labels may be strings or integers.
    """

    seed: int
    path: tuple = field(default_factory=tuple)

    def child(self, *labels) -> "RandomSource":
        for lab in labels:
            if not isinstance(lab, (str, int, np.integer)):
                raise TypeError(f"stream labels must be str or int, got {type(lab)!r}")
        return replace(self, path=self.path + tuple(labels))

    def _key_words(self) -> tuple[int, ...]:
        parts = []
        for lab in self.path:
            if isinstance(lab, (int, np.integer)):
                parts.append(f"i:{int(lab)}")
            else:
                parts.append("s:" + lab.replace("\\", "\\\\").replace("\x1f", "\\u"))
        digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
        return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 32, 4))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self._key_words())
        return np.random.Generator(np.random.Philox(seq))


def save_dataset(ds: Dataset, csv_path, schema_path) -> None:
    """Write a dataset as a CSV of values plus a one-line JSON schema sidecar."""
    csv_path = Path(csv_path)
    schema_path = Path(schema_path)
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([c.name for c in ds.columns])
        for row in ds.values:
            out = []
            for col, v in zip(ds.columns, row):
                out.append(str(int(v)) if col.kind == CATEGORICAL else repr(float(v)))
            writer.writerow(out)
    schema = {"columns": [_column_to_json(c) for c in ds.columns]}
    schema_path.write_text(json.dumps(schema) + "\n")


def load_dataset(csv_path, schema_path) -> Dataset:
    """Load a dataset written by :func:`save_dataset` (or hand-authored)."""
    schema = json.loads(Path(schema_path).read_text())
    columns = tuple(_column_from_json(c) for c in schema["columns"])
    with Path(csv_path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != [c.name for c in columns]:
            raise SchemaMismatchError(
                f"CSV header {header!r} does not match schema columns "
                f"{[c.name for c in columns]!r}"
            )
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise SchemaMismatchError("CSV contains no data rows")
    return Dataset(columns=columns, values=np.asarray(rows, dtype=np.float64))


def _column_to_json(col: Column) -> dict:
    out = {"name": col.name, "kind": col.kind}
    if col.kind == CATEGORICAL:
        out["categories"] = col.categories
    return out


def _column_from_json(obj: dict) -> Column:
    return Column(
        name=obj["name"],
        kind=obj.get("kind", NUMERICAL),
        categories=obj.get("categories"),
    )
