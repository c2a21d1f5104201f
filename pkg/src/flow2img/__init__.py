"""flow2img: reversible byte-level flow-to-image codec for IDS datasets."""

from flow2img.codec import EncodedImage, decode, encode, serialize_continuous
from flow2img.ingest import Dataset, FlowRecord, Split, load_dataset, stratified_holdout
from flow2img.layout import BytePlan, LayoutSpec, build_plan
from flow2img.manifest import Manifest, load_manifest, make_manifest, save_manifest
from flow2img.schema import (
    FeatureKind,
    FeatureSchema,
    LabelMode,
    LabelScheme,
    builtin_label_scheme,
    builtin_schema,
    load_schema,
)
from flow2img.stats import FittedStats, destandardize, fit, standardize

__version__ = "0.1.0"

__all__ = [
    "BytePlan",
    "Dataset",
    "EncodedImage",
    "FeatureKind",
    "FeatureSchema",
    "FittedStats",
    "FlowRecord",
    "LabelMode",
    "LabelScheme",
    "LayoutSpec",
    "Manifest",
    "Split",
    "build_plan",
    "builtin_label_scheme",
    "builtin_schema",
    "decode",
    "destandardize",
    "encode",
    "fit",
    "load_dataset",
    "load_manifest",
    "load_schema",
    "make_manifest",
    "save_manifest",
    "serialize_continuous",
    "standardize",
    "stratified_holdout",
]
