"""Track dataset loading, min-max scaling, splitting, and summary statistics.

A dataset is an ordered list of TrackRecord rows: 13 audio features in a
fixed canonical order plus a binary History label (1 = liked). Scaling maps
each feature into [0, 1] with its observed extremes; the inverse transform
is exact up to float rounding.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass

from .collab import pearson
from .errors import (
    AlreadyScaled,
    BadFraction,
    BadLabel,
    EmptyDataset,
    MissingColumn,
    NonNumericCell,
    TooFewRecords,
    UnknownFeature,
)

FEATURE_NAMES = (
    "acousticness",
    "danceability",
    "duration_ms",
    "energy",
    "instrumentalness",
    "key",
    "liveness",
    "loudness",
    "mode",
    "speechiness",
    "tempo",
    "time_signature",
    "valence",
)

DEFAULT_LABEL_COLUMN = "History"
TRACK_ID_COLUMN = "track_id"


@dataclass(frozen=True)
class TrackRecord:
    track_id: str
    features: tuple
    history: int

    def __post_init__(self):
        if len(self.features) != len(FEATURE_NAMES):
            raise ValueError(
                f"expected {len(FEATURE_NAMES)} features, got {len(self.features)}"
            )
        for v in self.features:
            if not math.isfinite(v):
                raise ValueError("features must be finite")
        if self.history not in (0, 1):
            raise ValueError(f"history must be 0 or 1, got {self.history!r}")


@dataclass(frozen=True)
class Dataset:
    records: tuple
    feature_names: tuple = FEATURE_NAMES
    scaled: bool = False
    label_name: str = DEFAULT_LABEL_COLUMN

    def __len__(self) -> int:
        return len(self.records)

    def feature_column(self, index: int) -> list[float]:
        return [r.features[index] for r in self.records]

    def labels(self) -> list[int]:
        return [r.history for r in self.records]


@dataclass(frozen=True)
class ScalerParams:
    feature_names: tuple
    mins: tuple
    maxs: tuple

    def __post_init__(self):
        if not len(self.feature_names) == len(self.mins) == len(self.maxs):
            raise ValueError("scaler fields must have one entry per feature")
        for lo, hi in zip(self.mins, self.maxs):
            if lo > hi:
                raise ValueError("scaler has x_min > x_max")


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple
    values: tuple  # tuple of row tuples, symmetric


def _feature_header_indices(header, path):
    lower = [h.strip().lower() for h in header]
    feature_idx = []
    for name in FEATURE_NAMES:
        if name not in lower:
            raise MissingColumn(name, path)
        feature_idx.append(lower.index(name))
    id_idx = lower.index(TRACK_ID_COLUMN) if TRACK_ID_COLUMN in lower else None
    return lower, feature_idx, id_idx


def _parse_feature_cells(row, row_num, feature_idx, path):
    values = []
    for name, idx in zip(FEATURE_NAMES, feature_idx):
        try:
            v = float(row[idx])
        except (ValueError, IndexError):
            raise NonNumericCell(row_num, name, path) from None
        if not math.isfinite(v):
            raise NonNumericCell(row_num, name, path)
        values.append(v)
    return tuple(values)


def load_dataset(path, label_column: str = DEFAULT_LABEL_COLUMN) -> Dataset:
    """Parse a feature CSV into an unscaled Dataset.

    The header must contain the 13 canonical feature names and the label
    column (matched case-insensitively); extra columns are ignored. A
    track_id column is used when present, else ids are the 0-based row index.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyDataset(path)
        lower, feature_idx, id_idx = _feature_header_indices(header, path)
        if label_column.lower() not in lower:
            raise MissingColumn(label_column, path)
        label_idx = lower.index(label_column.lower())

        records = []
        row_num = 0
        for row in reader:
            if not row:
                continue
            row_num += 1
            values = _parse_feature_cells(row, row_num, feature_idx, path)
            try:
                raw_label = row[label_idx]
                label = float(raw_label)
            except (ValueError, IndexError):
                raise BadLabel(row_num, row[label_idx] if label_idx < len(row) else None, path) from None
            if label not in (0.0, 1.0):
                raise BadLabel(row_num, raw_label, path)
            track_id = row[id_idx] if id_idx is not None else str(row_num - 1)
            records.append(TrackRecord(track_id, values, int(label)))

    if not records:
        raise EmptyDataset(path)
    return Dataset(tuple(records), FEATURE_NAMES, False, header[label_idx].strip())


def load_feature_records(path) -> list:
    """Parse a label-free candidate CSV into TrackRecords (history set to 0).

    Used for prediction and recommendation inputs, where no History column
    exists yet.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyDataset(path)
        _, feature_idx, id_idx = _feature_header_indices(header, path)
        records = []
        row_num = 0
        for row in reader:
            if not row:
                continue
            row_num += 1
            values = _parse_feature_cells(row, row_num, feature_idx, path)
            track_id = row[id_idx] if id_idx is not None else str(row_num - 1)
            records.append(TrackRecord(track_id, values, 0))
    if not records:
        raise EmptyDataset(path)
    return records


def save_dataset(ds: Dataset, path, label_column: str | None = None) -> None:
    """Write a Dataset back to CSV; floats use shortest round-trip decimals."""
    label = label_column if label_column is not None else ds.label_name
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join((TRACK_ID_COLUMN,) + ds.feature_names + (label,)) + "\n")
        for r in ds.records:
            cells = [r.track_id] + [str(v) for v in r.features] + [str(r.history)]
            fh.write(",".join(cells) + "\n")


def fit_scaler(ds: Dataset) -> ScalerParams:
    """Per-feature (min, max) over all records of an unscaled dataset."""
    if ds.scaled:
        raise AlreadyScaled("cannot fit a scaler on an already scaled dataset")
    if not ds.records:
        raise EmptyDataset()
    mins = list(ds.records[0].features)
    maxs = list(ds.records[0].features)
    for r in ds.records[1:]:
        for i, v in enumerate(r.features):
            if v < mins[i]:
                mins[i] = v
            if v > maxs[i]:
                maxs[i] = v
    return ScalerParams(ds.feature_names, tuple(mins), tuple(maxs))


def scale_value(p: ScalerParams, index: int, x: float) -> float:
    """Min-max scale one value; degenerate features map to 0, output clamped."""
    lo = p.mins[index]
    hi = p.maxs[index]
    if hi == lo:
        return 0.0
    v = (x - lo) / (hi - lo)
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def apply_scaler(p: ScalerParams, ds: Dataset) -> Dataset:
    """Scale every feature into [0, 1]; new out-of-range data is clamped."""
    if ds.scaled:
        raise AlreadyScaled()
    records = tuple(
        TrackRecord(
            r.track_id,
            tuple(scale_value(p, i, v) for i, v in enumerate(r.features)),
            r.history,
        )
        for r in ds.records
    )
    return Dataset(records, ds.feature_names, True, ds.label_name)


def inverse_scale(p: ScalerParams, value: float, feature: str) -> float:
    """Map a scaled value back to the original feature range."""
    if feature not in p.feature_names:
        raise UnknownFeature(feature)
    i = p.feature_names.index(feature)
    return value * (p.maxs[i] - p.mins[i]) + p.mins[i]


def correlation_matrix(ds: Dataset) -> CorrelationMatrix:
    """Pearson coefficients between all attribute columns (features + label).

    Computed once per (i, j) pair and mirrored, so the matrix is exactly
    symmetric. Constant columns correlate 0 with everything, 1 with themselves.
    """
    if len(ds.records) < 2:
        raise TooFewRecords(2, len(ds.records))
    columns = [ds.feature_column(i) for i in range(len(ds.feature_names))]
    columns.append([float(h) for h in ds.labels()])
    labels = ds.feature_names + (ds.label_name,)
    n = len(columns)
    grid = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                constant = min(columns[i]) == max(columns[i])
                grid[i][i] = 1.0 if constant else pearson(columns[i], columns[i]).value
            else:
                v = pearson(columns[i], columns[j]).value
                grid[i][j] = v
                grid[j][i] = v
    return CorrelationMatrix(labels, tuple(tuple(row) for row in grid))


def correlation_csv_text(cm: CorrelationMatrix) -> str:
    lines = ["attribute," + ",".join(cm.labels)]
    for label, row in zip(cm.labels, cm.values):
        lines.append(label + "," + ",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClassSummary:
    feature: str
    mean_liked: float | None
    mean_disliked: float | None
    count_liked: int
    count_disliked: int


def class_conditional_summary(ds: Dataset) -> dict:
    """Per-feature means split by label; an absent class yields count 0 and
    mean None."""
    liked = [r for r in ds.records if r.history == 1]
    disliked = [r for r in ds.records if r.history == 0]
    out = {}
    for i, name in enumerate(ds.feature_names):
        mean_l = sum(r.features[i] for r in liked) / len(liked) if liked else None
        mean_d = sum(r.features[i] for r in disliked) / len(disliked) if disliked else None
        out[name] = ClassSummary(name, mean_l, mean_d, len(liked), len(disliked))
    return out


def class_summary_csv_text(summary: dict) -> str:
    lines = ["feature,mean_liked,mean_disliked,count_liked,count_disliked"]
    for s in summary.values():
        mean_l = "" if s.mean_liked is None else str(s.mean_liked)
        mean_d = "" if s.mean_disliked is None else str(s.mean_disliked)
        lines.append(f"{s.feature},{mean_l},{mean_d},{s.count_liked},{s.count_disliked}")
    return "\n".join(lines) + "\n"


def shuffled_indices(count: int, rng) -> list[int]:
    """Fisher-Yates permutation driven only by rng.random(), which is the one
    generator method with a cross-version stability guarantee."""
    idx = list(range(count))
    for i in range(count - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        if j > i:
            j = i
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def split(ds: Dataset, train_fraction: float, seed: int):
    """Seeded stratified split into (train, validation) Datasets.

    Each class is shuffled independently; the train side takes
    floor(fraction * n_class), clamped to [1, n_class - 1] so neither side
    loses a class entirely when the class has 2+ records. A singleton class
    goes to the train side. Partitions preserve original record order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise BadFraction(train_fraction)
    rng = random.Random(seed)
    train_idx: list[int] = []
    val_idx: list[int] = []
    for label in (0, 1):
        members = [i for i, r in enumerate(ds.records) if r.history == label]
        n = len(members)
        if n == 0:
            continue
        order = shuffled_indices(n, rng)
        if n == 1:
            n_train = 1
        else:
            n_train = int(math.floor(train_fraction * n))
            n_train = max(1, min(n - 1, n_train))
        picked = [members[k] for k in order]
        train_idx.extend(picked[:n_train])
        val_idx.extend(picked[n_train:])
    train_idx.sort()
    val_idx.sort()
    train = Dataset(
        tuple(ds.records[i] for i in train_idx), ds.feature_names, ds.scaled, ds.label_name
    )
    val = Dataset(
        tuple(ds.records[i] for i in val_idx), ds.feature_names, ds.scaled, ds.label_name
    )
    return train, val
