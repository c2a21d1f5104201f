"""Lossless PNG I/O for encoded images: 8-bit RGB, no alpha, no interlacing."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from flow2img.codec import EncodedImage
from flow2img.errors import FormatError, IoError
from flow2img.layout import LayoutSpec


def render_png(image: EncodedImage, path: str | Path) -> None:
    try:
        Image.fromarray(image.pixels, mode="RGB").save(path, format="PNG")
    except OSError as exc:
        raise IoError(f"{path}: cannot write PNG: {exc}") from exc


def read_png(path: str | Path, layout: LayoutSpec, label: int = -1) -> EncodedImage:
    try:
        with Image.open(path) as img:
            if img.mode != "RGB":
                raise FormatError(f"{path}: expected 8-bit RGB, got mode {img.mode!r}")
            if img.size != (layout.side, layout.side):
                raise FormatError(
                    f"{path}: expected {layout.side}x{layout.side}, got {img.size[0]}x{img.size[1]}"
                )
            pixels = np.asarray(img, dtype=np.uint8)
    except FileNotFoundError as exc:
        raise IoError(f"{path}: no such file") from exc
    except OSError as exc:
        raise IoError(f"{path}: cannot read PNG: {exc}") from exc
    return EncodedImage(pixels=pixels, layout=layout, label=label)
