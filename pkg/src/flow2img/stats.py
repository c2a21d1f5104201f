"""Training-split statistics: z-score parameters and categorical vocabularies.

All statistics are fitted on the training split only; fitting on a test
split is rejected outright. Standardization runs in 64-bit arithmetic and
rounds once to float32 (the precision stored in the image), which keeps the
decode round-trip within the float32 quantization bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from flow2img.errors import (
    DecodeRangeError,
    DegenerateFeatureError,
    SchemaMismatchError,
    SplitHygieneError,
)
from flow2img.ingest import Dataset, FlowRecord, Split
from flow2img.schema import FeatureKind, FeatureSchema

EPSILON = 1e-8
UNK = "<UNK>"
UNK_INDEX = 0


@dataclass(frozen=True)
class ContinuousStat:
    mu: float
    sigma: float  # population standard deviation
    epsilon: float = EPSILON


@dataclass(frozen=True)
class Vocabulary:
    """Category -> index map; index 0 is reserved for UNK."""

    entries: dict[str, int]
    byte_width: int = field(init=False, default=1)

    def __post_init__(self):
        assert UNK_INDEX not in self.entries.values()
        object.__setattr__(self, "byte_width", 2 if len(self.entries) > 255 else 1)

    def __len__(self) -> int:
        return len(self.entries)

    def index_of(self, category: str | None) -> int:
        if category is None:
            return UNK_INDEX
        return self.entries.get(category, UNK_INDEX)

    def category_of(self, index: int) -> str:
        if index == UNK_INDEX:
            return UNK
        if index > len(self.entries) or index < 0:
            raise DecodeRangeError(
                f"index {index} exceeds vocabulary of size {len(self.entries)}"
            )
        return self._reverse()[index - 1]

    def _reverse(self) -> tuple[str, ...]:
        return tuple(self.entries)  # insertion order == index order


@dataclass(frozen=True)
class FittedStats:
    continuous: tuple[ContinuousStat, ...]
    vocabs: tuple[Vocabulary, ...]
    fitted_on: str  # "<dataset_id>/train"

    @property
    def mu(self) -> np.ndarray:
        return np.array([s.mu for s in self.continuous], dtype=np.float64)

    @property
    def scale(self) -> np.ndarray:
        """sigma + epsilon per continuous feature."""
        return np.array([s.sigma + s.epsilon for s in self.continuous], dtype=np.float64)

    @property
    def byte_widths(self) -> tuple[int, ...]:
        return tuple(v.byte_width for v in self.vocabs)


def fit(train: Dataset, schema: FeatureSchema) -> FittedStats:
    """Fits mu/sigma and vocabularies over the training split.

    Vocabulary indices follow first appearance in file order, starting at 1.
    """
    if train.split is not Split.TRAIN:
        raise SplitHygieneError("statistics must be fitted on the training split")
    if len(train) == 0:
        raise DegenerateFeatureError("cannot fit statistics on an empty dataset")

    continuous = []
    for j, name in enumerate(schema.continuous_names):
        col = train.continuous[:, j]
        vals = col[~np.isnan(col)]
        if len(vals) == 0:
            raise DegenerateFeatureError(f"feature {name!r} has no non-missing values")
        mu = float(np.mean(vals))
        sigma = float(np.std(vals))  # population std
        continuous.append(ContinuousStat(mu=mu, sigma=sigma))

    vocabs = []
    for j in range(schema.n_categorical):
        seen: dict[str, int] = {}
        for cat in train.categorical[:, j]:
            if cat is not None and cat not in seen:
                seen[cat] = len(seen) + 1
        vocabs.append(Vocabulary(entries=seen))

    return FittedStats(
        continuous=tuple(continuous),
        vocabs=tuple(vocabs),
        fitted_on=f"{train.schema_id}/{Split.TRAIN.value}",
    )


def _check_lengths(stats: FittedStats, schema: FeatureSchema) -> None:
    if len(stats.continuous) != schema.n_continuous or len(stats.vocabs) != schema.n_categorical:
        raise SchemaMismatchError(
            f"stats fitted for {len(stats.continuous)}+{len(stats.vocabs)} features, "
            f"schema has {schema.n_continuous}+{schema.n_categorical}"
        )


def split_record(record: FlowRecord, schema: FeatureSchema) -> tuple[list, list]:
    """Partitions a record's values into (continuous, categorical) lists in
    schema order."""
    if len(record.values) != len(schema.features):
        raise SchemaMismatchError(
            f"record has {len(record.values)} values, schema has {len(schema.features)}"
        )
    cont, cat = [], []
    for f, v in zip(schema.features, record.values):
        (cont if f.kind is FeatureKind.CONTINUOUS else cat).append(v)
    return cont, cat


def standardize(
    record: FlowRecord, stats: FittedStats, schema: FeatureSchema
) -> tuple[np.ndarray, np.ndarray]:
    """Returns (z, idx): float32 z-scores and int32 vocabulary indices.

    Missing continuous values standardize to exactly 0.0 (mean imputation);
    missing or unseen categories map to the UNK index 0.
    """
    _check_lengths(stats, schema)
    cont, cat = split_record(record, schema)
    x = np.array([np.nan if v is None else v for v in cont], dtype=np.float64)
    z64 = (x - stats.mu) / stats.scale
    z64[np.isnan(x)] = 0.0
    z = z64.astype(np.float32)
    idx = np.array(
        [v.index_of(c) for v, c in zip(stats.vocabs, cat)], dtype=np.int32
    )
    return z, idx


def standardize_batch(ds: Dataset, stats: FittedStats) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized standardize over a whole dataset."""
    _check_lengths(stats, ds.schema)
    x = ds.continuous
    z64 = (x - stats.mu) / stats.scale
    z64[np.isnan(x)] = 0.0
    z = z64.astype(np.float32)
    idx = np.empty((len(ds), len(stats.vocabs)), dtype=np.int32)
    for j, vocab in enumerate(stats.vocabs):
        entries = vocab.entries
        idx[:, j] = [entries.get(c, UNK_INDEX) for c in ds.categorical[:, j]]
    return z, idx


def destandardize(
    z: np.ndarray, idx: np.ndarray, stats: FittedStats, schema: FeatureSchema
) -> FlowRecord:
    """Inverse of standardize: x = z * (sigma + eps) + mu in 64-bit; UNK
    indices decode to the sentinel string."""
    _check_lengths(stats, schema)
    if len(z) != len(stats.continuous) or len(idx) != len(stats.vocabs):
        raise SchemaMismatchError("z/idx lengths do not match fitted statistics")
    x = np.asarray(z, dtype=np.float64) * stats.scale + stats.mu
    cats = [v.category_of(int(i)) for v, i in zip(stats.vocabs, idx)]
    values = []
    ci = ki = 0
    for f in schema.features:
        if f.kind is FeatureKind.CONTINUOUS:
            values.append(float(x[ci]))
            ci += 1
        else:
            values.append(cats[ki])
            ki += 1
    return FlowRecord(values=tuple(values), label=-1, source_row=-1)


def destandardize_batch(
    z: np.ndarray, stats: FittedStats
) -> np.ndarray:
    """Vectorized continuous inverse; categorical decoding stays per-value."""
    return np.asarray(z, dtype=np.float64) * stats.scale + stats.mu
