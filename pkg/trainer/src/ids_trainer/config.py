from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ids_trainer.errors import ConfigError

# Paper-scale settings use 100 epochs and seeds 42..51; the desk-scale
# defaults below run the full comparison in minutes on CPU.
DESK_EPOCHS = 10
PAPER_EPOCHS = 100
DESK_SEEDS = (42, 43, 44)
PAPER_SEEDS = tuple(range(42, 52))
DESK_SUBSAMPLE = 2000


class Modality(enum.Enum):
    FLOW_1D = "flow"
    IMAGE_2D = "image"


@dataclass(frozen=True)
class ExperimentConfig:
    modality: Modality
    label_mode: str = "binary"
    epochs: int = DESK_EPOCHS
    batch_size: int = 64
    learning_rate: float = 1e-4
    seeds: tuple[int, ...] = DESK_SEEDS
    val_fraction: float = 0.1
    subsample_per_class: int | None = DESK_SUBSAMPLE

    def __post_init__(self):
        if self.label_mode not in ("binary", "multi"):
            raise ConfigError(f"label_mode must be binary or multi, got {self.label_mode!r}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not (0.0 < self.val_fraction < 1.0):
            raise ConfigError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.subsample_per_class is not None and self.subsample_per_class < 1:
            raise ConfigError("subsample_per_class must be >= 1 or None")
