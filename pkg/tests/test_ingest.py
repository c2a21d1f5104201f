import numpy as np
import pytest

from conftest import make_dataset, make_schema
from flow2img.errors import ArityError, ConfigError, IoError, RowValueError
from flow2img.ingest import Split, load_dataset, stratified_holdout
from flow2img.schema import builtin_label_scheme, builtin_schema


def write_toy_csv(path, rows, header=None):
    lines = ([",".join(header)] if header else []) + [",".join(map(str, r)) for r in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def toy3_schema():
    # c0 continuous, k0 categorical, label, no excluded
    return make_schema(1, 1, has_header=True)


def test_load_basic(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    write_toy_csv(
        path,
        [["1.5", "tcp", "normal"], ["2.5", "udp", "bad"]],
        header=["c0", "k0", "label"],
    )
    scheme = builtin_label_scheme("nslkdd", "binary")
    ds = load_dataset(path, toy3_schema, scheme, Split.TRAIN)
    assert len(ds) == 2
    assert ds.continuous[0, 0] == 1.5
    assert ds.categorical[1, 0] == "udp"
    assert list(ds.labels) == [0, 1]
    rec = ds.record(0)
    assert rec.values == (1.5, "tcp")
    assert rec.source_row == 0


def test_missing_continuous_and_dash_categorical(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    write_toy_csv(
        path,
        [["", "-", "normal"], ["2", "", "normal"]],
        header=["c0", "k0", "label"],
    )
    scheme = builtin_label_scheme("nslkdd", "binary")
    ds = load_dataset(path, toy3_schema, scheme, Split.TRAIN)
    assert np.isnan(ds.continuous[0, 0])  # empty numeric cell is Missing
    assert ds.categorical[0, 0] == "-"  # dash is a category of its own
    assert ds.categorical[1, 0] == ""  # empty categorical is a category too
    assert ds.record(0).values[0] is None


def test_unparseable_numeric(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    write_toy_csv(path, [["ok?", "tcp", "normal"]], header=["c0", "k0", "label"])
    scheme = builtin_label_scheme("nslkdd", "binary")
    with pytest.raises(RowValueError) as exc:
        load_dataset(path, toy3_schema, scheme, Split.TRAIN)
    assert exc.value.row == 0
    assert exc.value.column == "c0"


def test_nonfinite_numeric_rejected(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    write_toy_csv(path, [["inf", "tcp", "normal"]], header=["c0", "k0", "label"])
    scheme = builtin_label_scheme("nslkdd", "binary")
    with pytest.raises(RowValueError):
        load_dataset(path, toy3_schema, scheme, Split.TRAIN)


def test_wrong_arity_headerless(tmp_path):
    schema = make_schema(1, 1, has_header=False)
    path = tmp_path / "a.csv"
    write_toy_csv(path, [["1", "tcp", "normal", "extra"]])
    scheme = builtin_label_scheme("nslkdd", "binary")
    with pytest.raises(ArityError):
        load_dataset(path, schema, scheme, Split.TRAIN)


def test_missing_header_column(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    write_toy_csv(path, [["1", "normal"]], header=["c0", "label"])
    scheme = builtin_label_scheme("nslkdd", "binary")
    with pytest.raises(ArityError):
        load_dataset(path, toy3_schema, scheme, Split.TRAIN)


def test_empty_file(tmp_path, toy3_schema):
    path = tmp_path / "a.csv"
    path.write_text("")
    scheme = builtin_label_scheme("nslkdd", "binary")
    ds = load_dataset(path, toy3_schema, scheme, Split.TRAIN)
    assert len(ds) == 0


def test_missing_file(toy3_schema):
    scheme = builtin_label_scheme("nslkdd", "binary")
    with pytest.raises(IoError):
        load_dataset("/nonexistent/path.csv", toy3_schema, scheme, Split.TRAIN)


def test_unsw_multi_drop_counted(tmp_path):
    from flow2img.synth import make_unsw

    paths = make_unsw(tmp_path, scale=0.005, extra_dropped=25)
    schema = builtin_schema("unswnb15")
    scheme = builtin_label_scheme("unswnb15", "multi")
    ds = load_dataset(paths["train"], schema, scheme, Split.TRAIN)
    assert ds.dropped_count == 25
    # binary keeps everything
    binary = builtin_label_scheme("unswnb15", "binary")
    ds2 = load_dataset(paths["train"], schema, binary, Split.TRAIN)
    assert len(ds2) == len(ds) + 25


def test_holdout_counts_and_determinism(toy_schema):
    rng = np.random.default_rng(3)
    n = 200
    ds = make_dataset(
        toy_schema,
        continuous=rng.normal(size=(n, 2)),
        categorical=[["a"]] * n,
        labels=rng.integers(0, 2, n),
    )
    rest, held = stratified_holdout(ds, 0.1, seed=42)
    counts = ds.class_counts()
    held_counts = held.class_counts()
    for cls, total in counts.items():
        assert held_counts[cls] == int(0.1 * total)
    # partition property
    all_rows = sorted(rest.source_rows) + sorted(held.source_rows)
    assert sorted(all_rows) == list(range(n))
    rest2, held2 = stratified_holdout(ds, 0.1, seed=42)
    assert np.array_equal(held.source_rows, held2.source_rows)
    rest3, held3 = stratified_holdout(ds, 0.1, seed=43)
    assert not np.array_equal(held.source_rows, held3.source_rows)


def test_holdout_floor_edge(toy_schema):
    ds = make_dataset(
        toy_schema,
        continuous=np.zeros((9, 2)),
        categorical=[["a"]] * 9,
        labels=[0] * 9,
    )
    rest, held = stratified_holdout(ds, 0.1, seed=42)
    assert len(held) == 0  # floor(0.9) promoted to documented minimum
    assert len(rest) == 9


def test_holdout_bad_fraction(toy_dataset):
    with pytest.raises(ConfigError):
        stratified_holdout(toy_dataset, 0.0, seed=1)
    with pytest.raises(ConfigError):
        stratified_holdout(toy_dataset, 1.0, seed=1)
