"""Selects the encode/decode kernel backend at import time.

The compiled Cython extension is preferred; the numpy implementation is the
fallback. Set FLOW2IMG_KERNEL=python to force the fallback (the test suite
uses this to cross-check both backends).
"""

from __future__ import annotations

import os

if os.environ.get("FLOW2IMG_KERNEL", "").lower() == "python":
    from flow2img import _kernels_py as _impl
else:
    try:
        from flow2img import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from flow2img import _kernels_py as _impl

BACKEND = _impl.BACKEND
encode_batch = _impl.encode_batch
decode_batch = _impl.decode_batch
