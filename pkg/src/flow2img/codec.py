"""The reversible record <-> image codec.

Encoding: standardize the record, serialize the float32 z-vector to
little-endian bytes along the inverted-L trajectory, place categorical
index bytes in the centred middle-row region, leave everything else zero.
Decoding inverts each step exactly; the z-vector round-trips bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flow2img import kernels
from flow2img.errors import DecodeRangeError, FormatError, StrayByteError
from flow2img.ingest import Dataset, FlowRecord
from flow2img.layout import BytePlan, LayoutSpec, build_plan
from flow2img.schema import FeatureSchema
from flow2img.stats import FittedStats, destandardize, standardize, standardize_batch


@dataclass(frozen=True)
class EncodedImage:
    pixels: np.ndarray  # (S, S, 3) uint8
    layout: LayoutSpec
    label: int = -1

    @property
    def side(self) -> int:
        return self.layout.side


def serialize_continuous(z) -> bytes:
    """IEEE-754 single precision, little-endian, concatenated in order."""
    return np.asarray(z, dtype="<f4").tobytes()


def deserialize_continuous(data: bytes) -> np.ndarray:
    return np.frombuffer(data, dtype="<f4").copy()


def encode_batch(
    z: np.ndarray, idx: np.ndarray, plan: BytePlan
) -> np.ndarray:
    """(n, c) z-scores + (n, k) indices -> (n, S, S, 3) uint8 images."""
    side = plan.layout.side
    widths = np.asarray(plan.byte_widths, dtype=np.int64)
    flat = kernels.encode_batch(
        z, idx, plan.continuous_flat, plan.categorical_flat, widths, side
    )
    return flat.reshape(len(z), side, side, 3)


def decode_batch(
    images: np.ndarray, plan: BytePlan, strict: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(n, S, S, 3) images -> (z, idx, stray); raises StrayByteError in
    strict mode when a record carries nonzero bytes outside the plan."""
    n = images.shape[0]
    flat = images.reshape(n, -1)
    widths = np.asarray(plan.byte_widths, dtype=np.int64)
    z, idx, stray = kernels.decode_batch(
        flat, plan.continuous_flat, plan.categorical_flat, plan.outside_flat, widths
    )
    if strict and stray.any():
        first = int(np.flatnonzero(stray)[0])
        raise StrayByteError(
            f"record {first}: nonzero byte outside the layout's regions "
            "(corrupted or foreign image; use lenient mode to ignore)"
        )
    return z, idx, stray


def encode(
    record: FlowRecord,
    stats: FittedStats,
    schema: FeatureSchema,
    layout: LayoutSpec,
    plan: BytePlan | None = None,
) -> EncodedImage:
    if plan is None:
        plan = build_plan(layout, schema, stats)
    z, idx = standardize(record, stats, schema)
    pixels = encode_batch(z[None, :], idx[None, :], plan)[0]
    return EncodedImage(pixels=pixels, layout=layout, label=record.label)


def decode(
    image: EncodedImage,
    stats: FittedStats,
    schema: FeatureSchema,
    layout: LayoutSpec,
    plan: BytePlan | None = None,
    strict: bool = True,
) -> FlowRecord:
    if image.pixels.shape != (layout.side, layout.side, 3):
        raise FormatError(
            f"image shape {image.pixels.shape} does not match layout side {layout.side}"
        )
    if plan is None:
        plan = build_plan(layout, schema, stats)
    z, idx, _ = decode_batch(image.pixels[None, :, :, :], plan, strict=strict)
    for j, vocab in enumerate(stats.vocabs):
        if int(idx[0, j]) > len(vocab):
            raise DecodeRangeError(
                f"categorical feature {j}: index {int(idx[0, j])} exceeds "
                f"vocabulary of size {len(vocab)}"
            )
    return destandardize(z[0], idx[0], stats, schema)


def encode_dataset(ds: Dataset, stats: FittedStats, plan: BytePlan) -> np.ndarray:
    """Encodes a whole dataset to a (n, S, S, 3) uint8 array."""
    z, idx = standardize_batch(ds, stats)
    return encode_batch(z, idx, plan)
