"""flow2img command line: fit, encode, decode, verify, montage, stats,
export-flow.

Exit-code discipline: any data error exits nonzero; warnings never change
the exit code. FLOW2IMG_THREADS caps the PNG-writing worker pool.
"""

from __future__ import annotations

import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from flow2img import codec, pngio
from flow2img.errors import (
    ConfigError,
    Flow2ImgError,
    IoError,
    RefuseOverwriteError,
)
from flow2img.ingest import Dataset, Split, expected_table1, load_dataset
from flow2img.layout import LayoutSpec, build_plan
from flow2img.manifest import Manifest, load_manifest, make_manifest, save_manifest
from flow2img.schema import LabelMode, builtin_label_scheme, resolve_schema
from flow2img.stats import UNK_INDEX, destandardize_batch, fit, standardize_batch

CHUNK = 8192

# Round-trip tolerance: |x' - x| <= REL_TOL * |x| + ABS_TOL per value.
REL_TOL = 1e-5
ABS_TOL = 1e-6


def _load(path, schema, dataset_id, label_mode, split) -> Dataset:
    scheme = builtin_label_scheme(dataset_id, label_mode)
    return load_dataset(path, schema, scheme, split)


def _n_threads() -> int:
    raw = os.environ.get("FLOW2IMG_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 4


# ------------------------------------------------------------------- fit

def cmd_fit(train_csv, schema_source, out_manifest, side=32, label_mode="binary"):
    schema = resolve_schema(schema_source)
    ds = _load(train_csv, schema, schema.dataset_id, label_mode, Split.TRAIN)
    if len(ds) == 0:
        raise IoError(f"{train_csv}: no records to fit on")
    stats = fit(ds, schema)
    layout = LayoutSpec(side=side)
    plan = build_plan(layout, schema, stats)  # capacity check before writing

    manifest = make_manifest(schema, layout, stats, source_path=train_csv)
    save_manifest(manifest, out_manifest)

    mus = stats.mu
    click.echo(f"fitted on {len(ds)} records of {schema.dataset_id} train split")
    click.echo(
        f"continuous: {schema.n_continuous} features, "
        f"mu in [{mus.min():.6g}, {mus.max():.6g}], "
        f"sigma in [{min(s.sigma for s in stats.continuous):.6g}, "
        f"{max(s.sigma for s in stats.continuous):.6g}]"
    )
    for name, vocab in zip(schema.categorical_names, stats.vocabs):
        click.echo(f"vocab {name}: {len(vocab)} categories, {vocab.byte_width} byte(s)")
    click.echo(
        f"capacity: {plan.n_continuous_bytes}/{layout.byte_capacity} trajectory bytes, "
        f"{plan.n_categorical_bytes} categorical bytes in row {layout.cat_row}"
    )
    click.echo(f"manifest written to {out_manifest}")
    return manifest


# ---------------------------------------------------------------- encode

def _image_filename(source_row: int, class_name: str) -> str:
    return f"{source_row:08d}_{class_name}.png"


def cmd_encode(manifest_path, input_csv, out_dir, labels_out, label_mode, force=False):
    manifest = load_manifest(manifest_path)
    schema, layout, stats = manifest.schema, manifest.layout, manifest.stats
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()) and not force:
        raise RefuseOverwriteError(f"{out_dir} is not empty; pass --force to overwrite")
    out_dir.mkdir(parents=True, exist_ok=True)

    ds = _load(input_csv, schema, schema.dataset_id, label_mode, Split.TEST)
    plan = build_plan(layout, schema, stats)
    names = ds.label_scheme.class_names

    rows = []
    with ThreadPoolExecutor(max_workers=_n_threads()) as pool:
        for start in range(0, len(ds), CHUNK):
            chunk = ds.subset(np.arange(start, min(start + CHUNK, len(ds))))
            images = codec.encode_dataset(chunk, stats, plan)
            jobs = []
            for i in range(len(chunk)):
                cls = names[chunk.labels[i]]
                fname = _image_filename(int(chunk.source_rows[i]), cls)
                img = codec.EncodedImage(images[i], layout, int(chunk.labels[i]))
                jobs.append(pool.submit(pngio.render_png, img, out_dir / fname))
                rows.append((fname, int(chunk.labels[i]), cls, int(chunk.source_rows[i])))
            for job in jobs:
                job.result()

    with open(labels_out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["filename", "class_index", "class_name", "source_row"])
        writer.writerows(rows)

    counts = ds.class_counts()
    click.echo(f"encoded {len(rows)} images into {out_dir}")
    if ds.dropped_count:
        click.echo(f"dropped {ds.dropped_count} rows with out-of-scheme labels")
    for cls, n in counts.items():
        click.echo(f"  {cls}: {n}")
    click.echo(f"labels index written to {labels_out}")
    return len(rows)


# ---------------------------------------------------------------- decode

def cmd_decode(manifest_path, images_dir, labels_index, out_csv, strict=True):
    manifest = load_manifest(manifest_path)
    schema, layout, stats = manifest.schema, manifest.layout, manifest.stats
    plan = build_plan(layout, schema, stats)
    images_dir = Path(images_dir)

    with open(labels_index, newline="") as fh:
        entries = list(csv.DictReader(fh))

    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [f.name for f in schema.features] + ["class_name", "source_row"]
        )
        for entry in entries:
            image = pngio.read_png(images_dir / entry["filename"], layout)
            record = codec.decode(image, stats, schema, layout, plan=plan, strict=strict)
            writer.writerow(
                list(record.values) + [entry["class_name"], entry["source_row"]]
            )
    click.echo(f"decoded {len(entries)} images into {out_csv}")
    return len(entries)


# ---------------------------------------------------------------- verify

def cmd_verify(manifest_path, input_csv, label_mode="binary"):
    """Encodes and decodes every record in memory and checks the round trip.

    Three checks must hold: the per-value bound |x' - x| <= REL_TOL * |x| +
    ABS_TOL; relative error <= REL_TOL for |x| >= 1 and absolute error <=
    ABS_TOL for |x| < 1; and bit-exact z-vector bytes. Missing cells decode
    to the training mean by construction and are excluded; categories unseen
    in training round-trip to UNK and are counted separately.
    """
    manifest = load_manifest(manifest_path)
    schema, layout, stats = manifest.schema, manifest.layout, manifest.stats
    plan = build_plan(layout, schema, stats)
    ds = _load(input_csv, schema, schema.dataset_id, label_mode, Split.TEST)
    if len(ds) == 0:
        click.echo(f"warning: {input_csv} has 0 records; nothing to verify", err=True)
        return {"records": 0, "ok": True, "max_abs_err": 0.0, "max_rel_err": 0.0,
                "cat_mismatches": 0, "unseen_categories": 0}

    vocab_entries = [v.entries for v in stats.vocabs]
    max_abs = 0.0
    max_rel = 0.0
    max_abs_nz = 0.0
    cat_mismatches = 0
    unseen = 0
    worst = None  # (source_row, feature_index, x, x_back)
    worst_margin = 0.0
    bit_exact = True

    for start in range(0, len(ds), CHUNK):
        chunk = ds.subset(np.arange(start, min(start + CHUNK, len(ds))))
        z, idx = standardize_batch(chunk, stats)
        images = codec.encode_batch(z, idx, plan)
        z_back, idx_back, stray = codec.decode_batch(images, plan, strict=False)
        if stray.any():
            first = int(chunk.source_rows[np.flatnonzero(stray)[0]])
            raise Flow2ImgError(f"row {first}: stray bytes after encode (internal error)")
        if z_back.tobytes() != z.tobytes():
            bit_exact = False
        if not np.array_equal(idx_back, idx):
            cat_mismatches += int((idx_back != idx).sum())

        x = chunk.continuous
        x_back = destandardize_batch(z_back, stats)
        present = ~np.isnan(x)
        abs_err = np.where(present, np.abs(x_back - x), 0.0)
        bound = REL_TOL * np.abs(np.where(present, x, 0.0)) + ABS_TOL
        viol = abs_err > bound
        if viol.any():
            i, j = np.unravel_index(np.argmax(abs_err - bound), abs_err.shape)
            margin = float((abs_err - bound)[i, j])
            if worst is None or margin > worst_margin:
                worst_margin = margin
                worst = (int(chunk.source_rows[i]), int(j), float(x[i, j]), float(x_back[i, j]))
        max_abs = max(max_abs, float(abs_err.max(initial=0.0)))
        big = present & (np.abs(x) >= 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(big, abs_err / np.abs(x), 0.0)
        max_rel = max(max_rel, float(rel.max(initial=0.0)))
        near_zero = present & (np.abs(x) < 1.0)
        max_abs_nz = max(
            max_abs_nz, float(np.where(near_zero, abs_err, 0.0).max(initial=0.0))
        )

        # categorical: exact recovery for in-vocabulary values; unseen
        # categories round-trip to UNK by design and are counted separately
        for j, entries in enumerate(vocab_entries):
            orig = chunk.categorical[:, j]
            in_vocab = np.array([c in entries for c in orig])
            unseen += int((~in_vocab).sum())
            decoded_idx = idx_back[:, j]
            expect_idx = np.array(
                [entries.get(c, UNK_INDEX) for c in orig], dtype=np.int32
            )
            cat_mismatches += int((decoded_idx[in_vocab] != expect_idx[in_vocab]).sum())

    ok = (
        worst is None
        and max_rel <= REL_TOL
        and max_abs_nz <= ABS_TOL
        and cat_mismatches == 0
        and bit_exact
    )
    report = {
        "records": len(ds),
        "ok": ok,
        "max_abs_err": max_abs,
        "max_rel_err": max_rel,
        "max_abs_err_near_zero": max_abs_nz,
        "cat_mismatches": cat_mismatches,
        "unseen_categories": unseen,
        "bit_exact": bit_exact,
        "worst": worst,
    }
    click.echo(
        f"verified {len(ds)} records: max rel err {max_rel:.3g} (|x| >= 1), "
        f"max abs err {max_abs_nz:.3g} (|x| < 1), categorical mismatches "
        f"{cat_mismatches}, unseen categories {unseen}, z bytes bit-exact: {bit_exact}"
    )
    if worst is not None:
        click.echo(
            f"round-trip bound violated at source row {worst[0]}, continuous "
            f"feature {worst[1]}: {worst[2]!r} -> {worst[3]!r}",
            err=True,
        )
    return report


# --------------------------------------------------------------- montage

def cmd_montage(images_dir, labels_index, out_png, per_class, scale=4):
    from PIL import Image, ImageDraw

    if per_class < 1:
        raise ConfigError(f"per-class sample count must be >= 1, got {per_class}")
    images_dir = Path(images_dir)
    with open(labels_index, newline="") as fh:
        entries = list(csv.DictReader(fh))
    if not entries:
        raise IoError(f"{labels_index}: empty labels index")

    by_class: dict[str, list[str]] = {}
    order: list[str] = []
    for entry in entries:
        cls = entry["class_name"]
        if cls not in by_class:
            by_class[cls] = []
            order.append(cls)
        if len(by_class[cls]) < per_class:
            by_class[cls].append(entry["filename"])

    first = Image.open(images_dir / entries[0]["filename"])
    side = first.size[0]
    tile = side * scale
    margin = 80
    grid = Image.new("RGB", (margin + per_class * tile, len(order) * tile), "black")
    draw = ImageDraw.Draw(grid)
    for r, cls in enumerate(order):
        files = by_class[cls]
        if len(files) < per_class:
            click.echo(
                f"warning: class {cls} has only {len(files)} samples; "
                "padding with black tiles",
                err=True,
            )
        draw.text((4, r * tile + tile // 2 - 6), cls, fill="white")
        for c, fname in enumerate(files):
            img = Image.open(images_dir / fname)
            img = img.resize((tile, tile), Image.NEAREST)
            grid.paste(img, (margin + c * tile, r * tile))
    grid.save(out_png, format="PNG")
    click.echo(f"montage of {len(order)} classes x {per_class} written to {out_png}")


# ----------------------------------------------------------------- stats

def cmd_stats(input_csv, schema_source, label_mode, split, expect=None):
    schema = resolve_schema(schema_source)
    ds = _load(input_csv, schema, schema.dataset_id, label_mode, split)
    counts = ds.class_counts()

    click.echo(f"{'Class':<16} {'Count':>8}")
    for cls, n in counts.items():
        click.echo(f"{cls:<16} {n:>8}")
    if ds.dropped_count:
        click.echo(f"(dropped {ds.dropped_count} out-of-scheme rows)")

    if expect == "table1":
        expected = expected_table1(schema.dataset_id, split)
        deltas = {
            cls: (counts.get(cls, 0), want)
            for cls, want in expected.items()
            if counts.get(cls, 0) != want
        }
        if deltas:
            for cls, (got, want) in deltas.items():
                click.echo(f"MISMATCH {cls}: got {got}, expected {want}", err=True)
            return False
        click.echo("all per-class counts match the published dataset statistics")
    return True


# ----------------------------------------------------------- export-flow

def cmd_export_flow(train_csv, input_csv, schema_source, label_mode, out_csv):
    """Flow-modality export: continuous features min-max scaled to [-1, 1]
    with min/max fitted on the training split; categorical features exported
    as vocabulary indices scaled over [0, vocab size]. Missing continuous
    values are imputed with the training mean before scaling.
    """
    schema = resolve_schema(schema_source)
    train = _load(train_csv, schema, schema.dataset_id, label_mode, Split.TRAIN)
    if len(train) == 0:
        raise IoError(f"{train_csv}: no records to fit min-max on")
    stats = fit(train, schema)

    with np.errstate(all="ignore"):
        lo = np.nanmin(train.continuous, axis=0)
        hi = np.nanmax(train.continuous, axis=0)
    span = hi - lo
    span[span == 0] = 1.0  # constant features export as -1

    def scaled_matrix(ds: Dataset) -> np.ndarray:
        x = ds.continuous.copy()
        nan = np.isnan(x)
        x[nan] = np.broadcast_to(stats.mu, x.shape)[nan]
        cont = 2.0 * (x - lo) / span - 1.0
        _, idx = standardize_batch(ds, stats)
        cat_cols = []
        for j, vocab in enumerate(stats.vocabs):
            denom = max(len(vocab), 1)
            cat_cols.append(2.0 * idx[:, j] / denom - 1.0)
        cat = np.stack(cat_cols, axis=1) if cat_cols else np.empty((len(ds), 0))
        return np.concatenate([cont, cat], axis=1)

    target = _load(input_csv, schema, schema.dataset_id, label_mode, Split.TEST)
    matrix = scaled_matrix(target)
    header = (
        list(schema.continuous_names)
        + list(schema.categorical_names)
        + ["class_index", "class_name", "source_row"]
    )
    names = target.label_scheme.class_names
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(target)):
            writer.writerow(
                [repr(float(v)) for v in matrix[i]]
                + [int(target.labels[i]), names[target.labels[i]], int(target.source_rows[i])]
            )
    click.echo(f"exported {len(target)} scaled flow records to {out_csv}")
    return len(target)


# ------------------------------------------------------------ click glue

@click.group()
def main():
    """Reversible byte-level flow-to-image codec and batch pipeline."""


def _run(fn, *args, **kwargs):
    try:
        result = fn(*args, **kwargs)
    except Flow2ImgError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    return result


@main.command("fit")
@click.option("--input", "train_csv", required=True, type=click.Path())
@click.option("--schema", "schema_source", required=True)
@click.option("--manifest", "out_manifest", required=True, type=click.Path())
@click.option("--side", default=32, show_default=True)
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="binary")
def fit_cmd(train_csv, schema_source, out_manifest, side, label_mode):
    """Fit statistics on a training split and write the manifest."""
    _run(cmd_fit, train_csv, schema_source, out_manifest, side, label_mode)


@main.command("encode")
@click.option("--manifest", required=True, type=click.Path())
@click.option("--input", "input_csv", required=True, type=click.Path())
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--labels", "labels_out", required=True, type=click.Path())
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="binary")
@click.option("--force", is_flag=True)
def encode_cmd(manifest, input_csv, out_dir, labels_out, label_mode, force):
    """Encode a CSV split into one PNG per record plus a labels index."""
    _run(cmd_encode, manifest, input_csv, out_dir, labels_out, label_mode, force)


@main.command("decode")
@click.option("--manifest", required=True, type=click.Path())
@click.option("--images-dir", required=True, type=click.Path())
@click.option("--labels", "labels_index", required=True, type=click.Path())
@click.option("--out", "out_csv", required=True, type=click.Path())
@click.option("--strict/--lenient", default=True, show_default=True)
def decode_cmd(manifest, images_dir, labels_index, out_csv, strict):
    """Decode a PNG directory back into feature values."""
    _run(cmd_decode, manifest, images_dir, labels_index, out_csv, strict)


@main.command("verify")
@click.option("--manifest", required=True, type=click.Path())
@click.option("--input", "input_csv", required=True, type=click.Path())
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="binary")
def verify_cmd(manifest, input_csv, label_mode):
    """Round-trip every record and check the reversibility bounds."""
    report = _run(cmd_verify, manifest, input_csv, label_mode)
    if not report["ok"]:
        sys.exit(1)


@main.command("montage")
@click.option("--images-dir", required=True, type=click.Path())
@click.option("--labels", "labels_index", required=True, type=click.Path())
@click.option("--out", "out_png", required=True, type=click.Path())
@click.option("--per-class", default=1, show_default=True)
@click.option("--scale", default=4, show_default=True)
def montage_cmd(images_dir, labels_index, out_png, per_class, scale):
    """Render a per-class sample grid (nearest-neighbor upscaled)."""
    _run(cmd_montage, images_dir, labels_index, out_png, per_class, scale)


@main.command("stats")
@click.option("--input", "input_csv", required=True, type=click.Path())
@click.option("--schema", "schema_source", required=True)
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="multi")
@click.option("--split", type=click.Choice(["train", "test"]), required=True)
@click.option("--expect", type=click.Choice(["table1"]), default=None)
def stats_cmd(input_csv, schema_source, label_mode, split, expect):
    """Print per-class counts, optionally checking the published table."""
    ok = _run(cmd_stats, input_csv, schema_source, label_mode, Split(split), expect)
    if not ok:
        sys.exit(1)


@main.command("export-flow")
@click.option("--train", "train_csv", required=True, type=click.Path())
@click.option("--input", "input_csv", required=True, type=click.Path())
@click.option("--schema", "schema_source", required=True)
@click.option("--label-mode", type=click.Choice(["binary", "multi"]), default="binary")
@click.option("--out", "out_csv", required=True, type=click.Path())
def export_flow_cmd(train_csv, input_csv, schema_source, label_mode, out_csv):
    """Export the min-max scaled flow-modality CSV for the trainer."""
    _run(cmd_export_flow, train_csv, input_csv, schema_source, label_mode, out_csv)


if __name__ == "__main__":
    main()
