"""CSV ingestion for the original train/test splits.

Records are held columnar (numpy arrays) for throughput; ``FlowRecord`` is
the per-row view used by the record-level codec API. Parsing rules:

* continuous cells: decimal numbers; empty cells are Missing (NaN) and will
  be mean-imputed downstream; non-finite or unparseable text is an error;
* categorical cells: taken verbatim as strings — empty strings and the
  literal ``-`` (a meaningful UNSW service value) are categories of their
  own, never Missing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd

from flow2img.errors import ArityError, ConfigError, IoError, RowValueError, UnknownLabelError
from flow2img.schema import FeatureKind, FeatureSchema, LabelScheme

log = logging.getLogger(__name__)

# Published per-class sample counts for the original splits (train, test).
TABLE1 = {
    "nslkdd": {
        "Normal": (67343, 9711),
        "R2L": (995, 2885),
        "Probe": (11656, 2421),
        "DoS": (45927, 7460),
        "U2R": (52, 67),
    },
    "unswnb15": {
        "Normal": (56000, 37000),
        "DoS": (12264, 4089),
        "Reconnaissance": (10491, 3496),
        "Shellcode": (1133, 378),
        "Worms": (130, 44),
    },
}


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class FlowRecord:
    """One flow, aligned to the schema's feature order.

    Continuous positions hold a finite float or None (Missing); categorical
    positions hold a string or None.
    """

    values: tuple
    label: int
    source_row: int


@dataclass
class Dataset:
    schema: FeatureSchema
    split: Split
    label_scheme: LabelScheme
    continuous: np.ndarray  # (n, n_cont) float64, NaN = Missing
    categorical: np.ndarray  # (n, n_cat) object (str)
    labels: np.ndarray  # (n,) int64
    source_rows: np.ndarray  # (n,) int64
    dropped_count: int = 0

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def schema_id(self) -> str:
        return self.schema.dataset_id

    def class_counts(self) -> dict[str, int]:
        counts = np.bincount(self.labels, minlength=self.label_scheme.n_classes)
        return {name: int(counts[i]) for i, name in enumerate(self.label_scheme.class_names)}

    def record(self, i: int) -> FlowRecord:
        values = []
        ci = ki = 0
        for f in self.schema.features:
            if f.kind is FeatureKind.CONTINUOUS:
                v = self.continuous[i, ci]
                values.append(None if math.isnan(v) else float(v))
                ci += 1
            else:
                values.append(self.categorical[i, ki])
                ki += 1
        return FlowRecord(tuple(values), int(self.labels[i]), int(self.source_rows[i]))

    @property
    def records(self):
        return (self.record(i) for i in range(len(self)))

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            schema=self.schema,
            split=self.split,
            label_scheme=self.label_scheme,
            continuous=self.continuous[indices],
            categorical=self.categorical[indices],
            labels=self.labels[indices],
            source_rows=self.source_rows[indices],
            dropped_count=0,
        )


def _empty_dataset(schema: FeatureSchema, scheme: LabelScheme, split: Split) -> Dataset:
    return Dataset(
        schema=schema,
        split=split,
        label_scheme=scheme,
        continuous=np.empty((0, schema.n_continuous), dtype=np.float64),
        categorical=np.empty((0, schema.n_categorical), dtype=object),
        labels=np.empty(0, dtype=np.int64),
        source_rows=np.empty(0, dtype=np.int64),
    )


def load_dataset(
    path: str | Path,
    schema: FeatureSchema,
    scheme: LabelScheme,
    split: Split | str,
) -> Dataset:
    """Parses one original split CSV into a Dataset.

    Rows whose raw label is marked dropped by the scheme are excluded and
    counted in ``dropped_count``.
    """
    split = Split(split)
    path = Path(path)
    if not path.is_file():
        raise IoError(f"{path}: no such file")
    try:
        if schema.has_header:
            df = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[])
        else:
            df = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, na_values=[])
    except pd.errors.EmptyDataError:
        log.warning("%s: empty file, loading 0 records", path)
        return _empty_dataset(schema, scheme, split)
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc

    needed = schema.file_columns()
    if schema.has_header:
        missing = [c for c in needed if c not in df.columns]
        if missing:
            raise ArityError(f"{path}: header lacks columns {missing}")
    else:
        if df.shape[1] != len(needed):
            raise ArityError(
                f"{path}: expected {len(needed)} columns "
                f"(features + label + excluded), found {df.shape[1]}"
            )
        df.columns = needed

    n = len(df)
    source_rows = np.arange(n, dtype=np.int64)

    cont = np.empty((n, schema.n_continuous), dtype=np.float64)
    for j, name in enumerate(schema.continuous_names):
        raw = df[name].str.strip()
        missing = raw == ""
        vals = pd.to_numeric(raw.where(~missing), errors="coerce")
        bad = vals.isna() & ~missing
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise RowValueError(
                f"{path}: row {row}, column {name!r}: cannot parse "
                f"{raw.iloc[row]!r} as a number",
                row=row,
                column=name,
            )
        arr = vals.to_numpy(dtype=np.float64)
        nonfinite = ~np.isfinite(arr) & ~missing.to_numpy()
        if nonfinite.any():
            row = int(np.flatnonzero(nonfinite)[0])
            raise RowValueError(
                f"{path}: row {row}, column {name!r}: non-finite value",
                row=row,
                column=name,
            )
        cont[:, j] = arr  # NaN where missing

    cat = np.empty((n, schema.n_categorical), dtype=object)
    for j, name in enumerate(schema.categorical_names):
        cat[:, j] = df[name].to_numpy(dtype=object)

    raw_labels = df[schema.label_column].str.strip()
    class_of = {}
    for raw in raw_labels.unique():
        try:
            class_of[raw] = scheme.classify(raw)
        except UnknownLabelError as exc:
            row = int(np.flatnonzero((raw_labels == raw).to_numpy())[0])
            raise RowValueError(
                f"{path}: row {row}: {exc}", row=row, column=schema.label_column
            ) from exc
    mapped = raw_labels.map(class_of)
    keep = mapped.notna().to_numpy()
    dropped = int((~keep).sum())
    if dropped:
        log.info("%s: dropped %d rows with out-of-scheme labels", path, dropped)

    labels = mapped.to_numpy()[keep].astype(np.int64)
    ds = Dataset(
        schema=schema,
        split=split,
        label_scheme=scheme,
        continuous=cont[keep],
        categorical=cat[keep],
        labels=labels,
        source_rows=source_rows[keep],
        dropped_count=dropped,
    )
    if len(ds) == 0:
        log.warning("%s: loaded 0 records", path)
    return ds


def stratified_holdout(ds: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Splits a training dataset into (remainder, holdout).

    The holdout takes floor(fraction * n_k) records of each class k, chosen
    by a per-class shuffle keyed on (seed, class index) so the partition is
    reproducible regardless of RNG stream sharing.
    """
    if not (0.0 < fraction < 1.0):
        raise ConfigError(f"holdout fraction must be in (0, 1), got {fraction}")
    if ds.split is not Split.TRAIN:
        raise ConfigError("holdout is only defined on the training split")

    val_mask = np.zeros(len(ds), dtype=bool)
    for k in range(ds.label_scheme.n_classes):
        positions = np.flatnonzero(ds.labels == k)
        n_val = int(math.floor(fraction * len(positions)))
        if len(positions) and n_val == 0:
            log.warning(
                "class %r has %d records; holdout of fraction %g takes 0",
                ds.label_scheme.class_names[k], len(positions), fraction,
            )
        rng = np.random.default_rng([seed, k])
        chosen = rng.permutation(len(positions))[:n_val]
        val_mask[positions[chosen]] = True

    rest = ds.subset(np.flatnonzero(~val_mask))
    held = ds.subset(np.flatnonzero(val_mask))
    return rest, held


def expected_table1(dataset_id: str, split: Split | str) -> dict[str, int]:
    split = Split(split)
    col = 0 if split is Split.TRAIN else 1
    return {cls: counts[col] for cls, counts in TABLE1[dataset_id].items()}
