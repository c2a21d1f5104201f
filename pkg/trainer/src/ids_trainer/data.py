"""Input loading for the two modalities plus split utilities.

Every read of an input artifact is appended to ``access_log`` so tests can
assert split hygiene: the test-split artifacts must only ever be touched
after training has finished.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from PIL import Image

from ids_trainer.errors import ConfigError, IoError

NON_FEATURE_COLUMNS = ("class_index", "class_name", "source_row")

# chronological audit trail of artifact reads and run phases
access_log: list[str] = []


def log_event(event: str) -> None:
    access_log.append(event)


@dataclass
class ModalityData:
    """A loaded split: x is (n, features) for flow or (n, 3, side, side) for
    images, y is the integer class vector."""

    x: np.ndarray
    y: np.ndarray
    class_names: tuple[str, ...]


def _class_names(df: pd.DataFrame) -> tuple[str, ...]:
    pairs = df[["class_index", "class_name"]].drop_duplicates()
    names: dict[int, str] = {int(i): n for i, n in pairs.itertuples(index=False)}
    return tuple(names.get(i, f"class{i}") for i in range(max(names) + 1))


def load_flow_csv(path: str | Path) -> ModalityData:
    path = Path(path)
    log_event(f"read:{path}")
    try:
        df = pd.read_csv(path)
    except OSError as exc:
        raise IoError(f"{path}: cannot read flow export: {exc}") from exc
    missing = [c for c in NON_FEATURE_COLUMNS if c not in df.columns]
    if missing:
        raise IoError(f"{path}: flow export lacks columns {missing}")
    features = [c for c in df.columns if c not in NON_FEATURE_COLUMNS]
    x = df[features].to_numpy(dtype=np.float32)
    y = df["class_index"].to_numpy(dtype=np.int64)
    return ModalityData(x=x, y=y, class_names=_class_names(df))


def load_image_dir(images_dir: str | Path, labels_csv: str | Path) -> ModalityData:
    images_dir = Path(images_dir)
    labels_csv = Path(labels_csv)
    log_event(f"read:{labels_csv}")
    try:
        df = pd.read_csv(labels_csv)
    except OSError as exc:
        raise IoError(f"{labels_csv}: cannot read labels index: {exc}") from exc
    if df.empty:
        raise IoError(f"{labels_csv}: empty labels index")
    log_event(f"read:{images_dir}")

    arrays = []
    for fname in df["filename"]:
        try:
            with Image.open(images_dir / fname) as im:
                arrays.append(np.asarray(im.convert("RGB"), dtype=np.uint8))
        except OSError as exc:
            raise IoError(f"{images_dir / fname}: cannot read image: {exc}") from exc
    # channels-first, scaled to [0, 1]
    x = np.stack(arrays).transpose(0, 3, 1, 2).astype(np.float32) / 255.0
    y = df["class_index"].to_numpy(dtype=np.int64)
    return ModalityData(x=x, y=y, class_names=_class_names(df))


def subsample_per_class(data: ModalityData, cap: int | None, seed: int) -> ModalityData:
    """Keeps at most ``cap`` records of each class, chosen by a seeded
    per-class shuffle. Every class present must survive."""
    if cap is None:
        return data
    keep = []
    for k in np.unique(data.y):
        positions = np.flatnonzero(data.y == k)
        rng = np.random.default_rng([seed, int(k)])
        keep.append(positions[rng.permutation(len(positions))[:cap]])
    idx = np.sort(np.concatenate(keep))
    out = ModalityData(x=data.x[idx], y=data.y[idx], class_names=data.class_names)
    if len(np.unique(out.y)) != len(np.unique(data.y)):
        raise ConfigError("a class vanished from the training subsample")
    return out


def stratified_val_split(
    data: ModalityData, fraction: float, seed: int
) -> tuple[ModalityData, ModalityData]:
    """Splits into (train, validation) taking floor(fraction * n_k) of each
    class, mirroring the codec's holdout semantics."""
    if not (0.0 < fraction < 1.0):
        raise ConfigError(f"val fraction must be in (0, 1), got {fraction}")
    mask = np.zeros(len(data.y), dtype=bool)
    for k in np.unique(data.y):
        positions = np.flatnonzero(data.y == k)
        n_val = int(fraction * len(positions))
        rng = np.random.default_rng([seed, int(k)])
        mask[positions[rng.permutation(len(positions))[:n_val]]] = True
    train = ModalityData(x=data.x[~mask], y=data.y[~mask], class_names=data.class_names)
    val = ModalityData(x=data.x[mask], y=data.y[mask], class_names=data.class_names)
    if len(np.unique(train.y)) != len(np.unique(data.y)):
        raise ConfigError("a class vanished from the post-holdout training set")
    return train, val
