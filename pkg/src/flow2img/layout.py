"""Spatial layout: the inverted-L trajectory and the centred categorical row.

Coordinates are (row, col) with (0, 0) at the top-left. The trajectory runs
up the rightmost column from (S-1, S-1) to (0, S-1), then left along the top
row from (0, S-2) to (0, 0): 2S-1 pixels, 3(2S-1) byte slots filled in R, G,
B order as the byte stream advances. Categorical index bytes sit in row
floor(S/2), horizontally centred at byte granularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from flow2img.errors import CapacityError, ConfigError, OverlapError
from flow2img.schema import FeatureSchema
from flow2img.stats import FittedStats

N_CHANNELS = 3


@dataclass(frozen=True)
class LayoutSpec:
    side: int = 32

    def __post_init__(self):
        if self.side < 2:
            raise ConfigError(f"image side must be >= 2, got {self.side}")

    @property
    def cat_row(self) -> int:
        return self.side // 2

    @property
    def n_trajectory_pixels(self) -> int:
        # The corner (0, S-1) belongs to the column segment only.
        return 2 * self.side - 1

    @property
    def byte_capacity(self) -> int:
        return N_CHANNELS * self.n_trajectory_pixels

    def trajectory(self) -> list[tuple[int, int]]:
        s = self.side
        column = [(r, s - 1) for r in range(s - 1, -1, -1)]
        top_row = [(0, c) for c in range(s - 2, -1, -1)]
        return column + top_row

    def byte_slot(self, i: int) -> tuple[int, int, int]:
        """(row, col, channel) of trajectory byte slot i."""
        row, col = self.trajectory()[i // N_CHANNELS]
        return row, col, i % N_CHANNELS


@dataclass(frozen=True)
class BytePlan:
    """Precomputed byte placement for one (layout, schema, stats) triple.

    Flat indices address the flattened (S*S*3,) image buffer in row-major
    (row, col, channel) order; they are what the encode/decode kernels use.
    """

    layout: LayoutSpec
    continuous_slots: tuple[tuple[int, int, int], ...]
    categorical_slots: tuple[tuple[int, int, int], ...]
    byte_widths: tuple[int, ...]
    continuous_flat: np.ndarray = field(repr=False, default=None)
    categorical_flat: np.ndarray = field(repr=False, default=None)
    outside_flat: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        def flatten(slots):
            s = self.layout.side
            return np.array(
                [(r * s + c) * N_CHANNELS + ch for r, c, ch in slots], dtype=np.int64
            )

        cont = flatten(self.continuous_slots)
        cat = flatten(self.categorical_slots)
        used = set(cont.tolist()) | set(cat.tolist())
        total = self.layout.side * self.layout.side * N_CHANNELS
        outside = np.array(sorted(set(range(total)) - used), dtype=np.int64)
        object.__setattr__(self, "continuous_flat", cont)
        object.__setattr__(self, "categorical_flat", cat)
        object.__setattr__(self, "outside_flat", outside)

    @property
    def n_continuous_bytes(self) -> int:
        return len(self.continuous_slots)

    @property
    def n_categorical_bytes(self) -> int:
        return len(self.categorical_slots)


def build_plan(layout: LayoutSpec, schema: FeatureSchema, stats: FittedStats) -> BytePlan:
    """Computes the byte placement and validates capacity.

    Continuous bytes occupy the leading 4 * n_continuous trajectory slots;
    categorical bytes start at offset floor((3S - L) / 2) within the centre
    row's 3S byte slots and must not reach the trajectory column.
    """
    n_cont_bytes = 4 * schema.n_continuous
    if n_cont_bytes > layout.byte_capacity:
        raise CapacityError(
            f"continuous payload of {n_cont_bytes} bytes exceeds the "
            f"trajectory capacity of {layout.byte_capacity} bytes (S={layout.side})"
        )

    continuous_slots = tuple(layout.byte_slot(i) for i in range(n_cont_bytes))

    widths = stats.byte_widths
    total_cat = sum(widths)
    row_bytes = N_CHANNELS * layout.side
    start = (row_bytes - total_cat) // 2
    # Column S-1 of the centre row belongs to the trajectory.
    if start < 0 or start + total_cat > N_CHANNELS * (layout.side - 1):
        raise OverlapError(
            f"{total_cat} categorical bytes centred in row {layout.cat_row} "
            f"would reach the trajectory column (S={layout.side})"
        )
    categorical_slots = tuple(
        (layout.cat_row, (start + j) // N_CHANNELS, (start + j) % N_CHANNELS)
        for j in range(total_cat)
    )
    return BytePlan(
        layout=layout,
        continuous_slots=continuous_slots,
        categorical_slots=categorical_slots,
        byte_widths=widths,
    )
