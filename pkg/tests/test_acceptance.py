"""End-to-end acceptance checks at full corpus scale.

Each test prints a single PASS/FAIL line for its criterion. The corpus
fixture generates synthetic NSL-KDD and UNSW-NB15 splits whose per-class
counts match the published dataset statistics exactly.
"""

import hashlib
import math

import numpy as np
import pytest

from conftest import make_dataset, make_schema
from flow2img.cli import cmd_encode, cmd_fit, cmd_stats, cmd_verify
from flow2img.codec import decode_batch, encode_batch
from flow2img.errors import CapacityError, OverlapError
from flow2img.ingest import Split
from flow2img.layout import LayoutSpec, build_plan
from flow2img.manifest import load_manifest
from flow2img.schema import builtin_schema
from flow2img.stats import UNK_INDEX, fit, standardize

pytestmark = pytest.mark.acceptance


def report(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" -- {detail}"
    print(line)
    assert ok, line


# ------------------------------------------------------------ capacity

def test_acceptance_capacity():
    layout = LayoutSpec(side=32)
    unsw = 4 * builtin_schema("unswnb15").n_continuous
    nsl = 4 * builtin_schema("nslkdd").n_continuous
    ok = layout.byte_capacity == 189 and unsw == 148 and nsl == 152
    report(
        "byte capacity: 189 trajectory slots, payloads 148 (unswnb15) / 152 (nslkdd)",
        ok, f"capacity={layout.byte_capacity} unsw={unsw} nsl={nsl}",
    )


# ------------------------------------------------- published class counts

def test_acceptance_published_counts(corpus):
    results = {}
    for key, path in corpus.items():
        dataset_id, split = key.rsplit("_", 1)
        results[key] = cmd_stats(path, dataset_id, "multi", Split(split), expect="table1")
    ok = all(results.values())
    report(
        "per-class counts match the published dataset statistics on all four splits",
        ok, ", ".join(f"{k}={'ok' if v else 'MISMATCH'}" for k, v in results.items()),
    )


# ----------------------------------------------------- full-corpus verify

@pytest.fixture(scope="module")
def manifests(corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("manifests")
    paths = {}
    for ds in ("nslkdd", "unswnb15"):
        path = out / f"{ds}.json"
        cmd_fit(corpus[f"{ds}_train"], ds, path)
        paths[ds] = path
    return paths


def test_acceptance_roundtrip_full_corpus(corpus, manifests):
    details = []
    ok = True
    for ds in ("nslkdd", "unswnb15"):
        for split in ("train", "test"):
            rep = cmd_verify(manifests[ds], corpus[f"{ds}_{split}"])
            ok = ok and rep["ok"] and rep["bit_exact"] and rep["cat_mismatches"] == 0
            details.append(
                f"{ds}/{split}: n={rep['records']} rel={rep['max_rel_err']:.2e} "
                f"abs={rep['max_abs_err_near_zero']:.2e}"
            )
    report(
        "round trip over the full corpus: |x'-x| <= 1e-5|x| + 1e-6, exact "
        "categories, bit-exact standardized bytes",
        ok, "; ".join(details),
    )


# ----------------------------------------------------------- determinism

def _hash_tree(d):
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in d.glob("*.png")
    }


def test_acceptance_determinism(corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("determinism")
    hashes = []
    canon = []
    for run in (1, 2):
        man = out / f"run{run}.json"
        img_dir = out / f"imgs{run}"
        cmd_fit(corpus["nslkdd_train"], "nslkdd", man)
        canon.append(load_manifest(man).canonical_bytes())
        cmd_encode(man, corpus["nslkdd_train"], img_dir, out / f"labels{run}.csv",
                   "binary")
        hashes.append(_hash_tree(img_dir))
    same_manifest = canon[0] == canon[1]
    same_images = hashes[0] == hashes[1]
    report(
        "two independent fit+encode runs produce identical manifests and "
        "bit-identical images",
        same_manifest and same_images,
        f"manifest_equal={same_manifest} images={len(hashes[0])} "
        f"images_equal={same_images}",
    )


# ------------------------------------------------------ structural laws

def test_acceptance_structural_properties():
    checks = []

    # trajectory length 2S-1 for every side in 2..64
    checks.append(all(
        len(LayoutSpec(side=s).trajectory()) == 2 * s - 1 for s in range(2, 65)
    ))

    # feature k starts at trajectory pixel floor(4k/3), channel 4k mod 3
    layout = LayoutSpec(side=32)
    traj = layout.trajectory()
    checks.append(all(
        layout.byte_slot(4 * k) == (*traj[(4 * k) // 3], (4 * k) % 3)
        for k in range(47)
    ))

    # 1000 random records leave every pixel outside the payload at zero
    schema = make_schema(38, 3)
    cats = [[f"p{i % 3}", f"s{i % 7}", f"f{i % 5}"] for i in range(16)]
    ds = make_dataset(schema, continuous=np.arange(16 * 38, dtype=float).reshape(16, 38),
                      categorical=cats)
    stats = fit(ds, schema)
    plan = build_plan(layout, schema, stats)
    rng = np.random.default_rng(12345)
    z = rng.normal(scale=100, size=(1000, 38)).astype(np.float32)
    idx = rng.integers(0, 4, size=(1000, 3)).astype(np.int32)
    images = encode_batch(z, idx, plan)
    checks.append(not images.reshape(1000, -1)[:, plan.outside_flat].any())
    z_back, idx_back, stray = decode_batch(images, plan)
    checks.append(z_back.tobytes() == z.tobytes() and np.array_equal(idx_back, idx)
                  and not stray.any())

    # capacity boundary: 47 features fit in a 32x32 image, 48 do not
    def plan_for(n_cont):
        s = make_schema(n_cont, 0)
        d = make_dataset(s, continuous=np.arange(2 * n_cont, dtype=float).reshape(2, n_cont),
                         categorical=[[], []])
        return build_plan(layout, s, fit(d, s))

    plan_for(47)
    try:
        plan_for(48)
        checks.append(False)
    except CapacityError:
        checks.append(True)

    # categorical row overflow raises
    s10 = make_schema(1, 10)
    d10 = make_dataset(
        s10, continuous=[[0.0], [1.0]],
        categorical=[[f"x{j}" for j in range(10)], [f"y{j}" for j in range(10)]],
    )
    try:
        build_plan(LayoutSpec(side=4), s10, fit(d10, s10))
        checks.append(False)
    except OverlapError:
        checks.append(True)

    # categories never seen in training map to the reserved index 0
    toy_schema = make_schema(1, 1)
    toy = make_dataset(toy_schema, continuous=[[1.0], [2.0]],
                       categorical=[["tcp"], ["udp"]])
    toy_stats = fit(toy, toy_schema)
    from flow2img.ingest import FlowRecord

    _, unseen_idx = standardize(FlowRecord((1.0, "gopher"), 0, 0), toy_stats, toy_schema)
    checks.append(unseen_idx[0] == UNK_INDEX)

    report(
        "structural laws: trajectory length, byte/pixel alignment, zero padding, "
        "capacity and overlap boundaries, reserved unknown index",
        all(checks), f"{sum(checks)}/{len(checks)} checks",
    )


# ------------------------------------------------------ statistics oracle

def test_acceptance_statistics_oracle():
    schema = make_schema(2, 1)
    ds = make_dataset(
        schema,
        continuous=[[1.0, 10.0], [2.0, 10.0], [3.0, 10.0], [4.0, 10.0]],
        categorical=[["tcp"], ["udp"], ["tcp"], ["icmp"]],
    )
    stats = fit(ds, schema)
    ok = (
        abs(stats.continuous[0].mu - 2.5) < 1e-12
        and abs(stats.continuous[0].sigma - math.sqrt(1.25)) < 1e-12
        and stats.continuous[1].sigma == 0.0
        and stats.vocabs[0].entries == {"tcp": 1, "udp": 2, "icmp": 3}
    )
    report(
        "training statistics match hand-computed mean, population deviation, "
        "and first-appearance vocabulary to 1e-12",
        ok,
        f"mu={stats.continuous[0].mu!r} sigma={stats.continuous[0].sigma!r}",
    )
