"""Benchmark the compiled encode/decode kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [n_records] [repeats]
"""

import sys
import time

import numpy as np

from flow2img import _kernels_py
from flow2img.layout import LayoutSpec, build_plan
from flow2img.schema import builtin_schema
from flow2img.stats import ContinuousStat, FittedStats, Vocabulary

try:
    from flow2img import _kernels
except ImportError:
    _kernels = None


def make_plan():
    schema = builtin_schema("unswnb15")
    continuous = tuple(ContinuousStat(mu=0.0, sigma=1.0) for _ in range(schema.n_continuous))
    vocabs = tuple(
        Vocabulary(entries={f"v{i}": i + 1 for i in range(8)})
        for _ in range(schema.n_categorical)
    )
    stats = FittedStats(continuous=continuous, vocabs=vocabs, fitted_on="train")
    return build_plan(LayoutSpec(side=32), schema, stats)


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    plan = make_plan()
    widths = np.asarray(plan.byte_widths, dtype=np.int64)
    rng = np.random.default_rng(0)
    z = rng.normal(size=(n, len(plan.continuous_flat) // 4)).astype(np.float32)
    idx = rng.integers(0, 9, size=(n, len(widths))).astype(np.int32)
    eargs = (z, idx, plan.continuous_flat, plan.categorical_flat, widths, 32)

    backends = [("numpy", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))

    print(f"{n} records x {repeats} repeats (best of)")
    results = {}
    for name, mod in backends:
        t_enc, images = bench(lambda m=mod: m.encode_batch(*eargs), repeats)
        dargs = (images, plan.continuous_flat, plan.categorical_flat,
                 plan.outside_flat, widths)
        t_dec, decoded = bench(lambda m=mod, d=dargs: m.decode_batch(*d), repeats)
        results[name] = (t_enc, t_dec, images, decoded)
        print(f"  {name:>6}  encode {t_enc * 1e3:8.1f} ms ({n / t_enc / 1e6:5.2f} M rec/s)"
              f"   decode {t_dec * 1e3:8.1f} ms ({n / t_dec / 1e6:5.2f} M rec/s)")

    if len(results) == 2:
        c, p = results["cython"], results["numpy"]
        assert c[2].tobytes() == p[2].tobytes(), "backends disagree on encode"
        assert c[3][0].tobytes() == p[3][0].tobytes(), "backends disagree on decode"
        print(f"  speedup: encode {p[0] / c[0]:.2f}x, decode {p[1] / c[1]:.2f}x "
              "(outputs bit-identical)")
    else:
        print("  compiled kernel not available; benchmarked fallback only")


if __name__ == "__main__":
    main()
