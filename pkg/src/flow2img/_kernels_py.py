"""Numpy implementation of the batch encode/decode kernels.

Used when the compiled extension is unavailable (or forced via
FLOW2IMG_KERNEL=python). Semantics must stay byte-identical to
flow2img._kernels.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _categorical_bytes(idx: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """(n, k) int32 indices -> (n, L) uint8 little-endian byte stream."""
    n = idx.shape[0]
    cols = []
    for j, w in enumerate(widths):
        vals = idx[:, j]
        if w == 1:
            cols.append(vals.astype(np.uint8).reshape(n, 1))
        else:
            le = vals.astype("<u2").reshape(n, 1)
            cols.append(le.view(np.uint8).reshape(n, 2))
    if not cols:
        return np.zeros((n, 0), dtype=np.uint8)
    return np.concatenate(cols, axis=1)


def encode_batch(
    z: np.ndarray,
    idx: np.ndarray,
    cont_flat: np.ndarray,
    cat_flat: np.ndarray,
    widths: np.ndarray,
    side: int,
) -> np.ndarray:
    """Encodes (n, c) float32 z-scores and (n, k) indices into flattened
    (n, side*side*3) uint8 image buffers."""
    n = z.shape[0]
    out = np.zeros((n, side * side * 3), dtype=np.uint8)
    cont_bytes = np.ascontiguousarray(z.astype("<f4", copy=False)).view(np.uint8)
    out[:, cont_flat] = cont_bytes.reshape(n, -1)
    out[:, cat_flat] = _categorical_bytes(idx, widths)
    return out


def decode_batch(
    images: np.ndarray,
    cont_flat: np.ndarray,
    cat_flat: np.ndarray,
    outside_flat: np.ndarray,
    widths: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of encode_batch on flattened buffers.

    Returns (z, idx, stray) where stray[i] is True if record i has a nonzero
    byte outside the plan's slots.
    """
    n = images.shape[0]
    cont_bytes = np.ascontiguousarray(images[:, cont_flat])
    z = cont_bytes.view("<f4").reshape(n, -1)
    cat_bytes = images[:, cat_flat]
    idx = np.empty((n, len(widths)), dtype=np.int32)
    off = 0
    for j, w in enumerate(widths):
        if w == 1:
            idx[:, j] = cat_bytes[:, off]
        else:
            idx[:, j] = (
                np.ascontiguousarray(cat_bytes[:, off : off + 2]).view("<u2").reshape(n)
            )
        off += w
    stray = images[:, outside_flat].any(axis=1)
    return z, idx, stray
