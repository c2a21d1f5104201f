import numpy as np
import pytest

from flow2img.ingest import Dataset, Split
from flow2img.schema import (
    Feature,
    FeatureKind,
    FeatureSchema,
    LabelMode,
    LabelScheme,
)


def make_schema(n_cont, n_cat, dataset_id="toy", has_header=True):
    features = [Feature(f"c{i}", FeatureKind.CONTINUOUS) for i in range(n_cont)]
    features += [Feature(f"k{i}", FeatureKind.CATEGORICAL) for i in range(n_cat)]
    return FeatureSchema(
        dataset_id=dataset_id,
        features=tuple(features),
        label_column="label",
        excluded_columns=(),
        has_header=has_header,
    )


def make_dataset(schema, continuous, categorical, labels=None, split=Split.TRAIN):
    n = len(categorical) if schema.n_categorical else len(continuous)
    continuous = np.asarray(continuous, dtype=np.float64).reshape(n, schema.n_continuous)
    cat = np.empty((n, schema.n_categorical), dtype=object)
    for i, row in enumerate(categorical):
        cat[i, :] = row
    if labels is None:
        labels = np.zeros(n, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    n_classes = max(2, int(labels.max(initial=0)) + 1)
    names = ("Normal", "Attack") + tuple(f"C{k}" for k in range(2, n_classes))
    scheme = LabelScheme(
        mode=LabelMode.BINARY, class_names=names[:n_classes], mapping={}, default_class=0
    )
    return Dataset(
        schema=schema,
        split=split,
        label_scheme=scheme,
        continuous=continuous,
        categorical=cat,
        labels=labels,
        source_rows=np.arange(n, dtype=np.int64),
    )


@pytest.fixture
def toy_schema():
    return make_schema(2, 1)


@pytest.fixture
def toy_dataset(toy_schema):
    return make_dataset(
        toy_schema,
        continuous=[[1.0, 2.0], [2.0, 2.0], [3.0, 2.0], [4.0, 2.0]],
        categorical=[["tcp"], ["udp"], ["tcp"], ["icmp"]],
    )


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Full-scale synthetic corpus matching the published per-class counts."""
    from flow2img import synth

    out = tmp_path_factory.mktemp("corpus")
    return synth.make_all(out)
