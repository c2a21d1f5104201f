"""Feature schemas and label schemes for the supported flow datasets.

A schema fixes the feature order, which doubles as the byte-stream
serialization order of the codec: the same feature always lands on the
same image bytes. Shipped defaults for NSL-KDD and UNSW-NB15 live as JSON
documents under ``flow2img/schemas/`` and are user-editable copies of the
community-standard partitions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from flow2img.errors import (
    SchemaParseError,
    SchemaValidationError,
    UnknownDatasetError,
    UnknownLabelError,
)

BUILTIN_DATASETS = ("nslkdd", "unswnb15")


class FeatureKind(str, Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"


class LabelMode(str, Enum):
    BINARY = "binary"
    MULTI = "multi"


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind


@dataclass(frozen=True)
class FeatureSchema:
    dataset_id: str
    features: tuple[Feature, ...]
    label_column: str
    excluded_columns: tuple[str, ...]
    has_header: bool

    @property
    def continuous_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if f.kind is FeatureKind.CONTINUOUS)

    @property
    def categorical_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if f.kind is FeatureKind.CATEGORICAL)

    @property
    def n_continuous(self) -> int:
        return len(self.continuous_names)

    @property
    def n_categorical(self) -> int:
        return len(self.categorical_names)

    def file_columns(self) -> list[str]:
        """Column order assumed for headerless files: features, then the
        label, then the excluded trailing columns."""
        return [f.name for f in self.features] + [self.label_column] + list(self.excluded_columns)


@dataclass(frozen=True)
class LabelScheme:
    """Maps raw label strings to class indices.

    ``mapping`` lists explicit assignments; raw labels in ``dropped`` are
    excluded from the dataset (UNSW multi-class keeps only five classes);
    anything else falls through to ``default_class`` when set, otherwise it
    is an error.
    """

    mode: LabelMode
    class_names: tuple[str, ...]
    mapping: dict[str, int] = field(default_factory=dict)
    dropped: frozenset[str] = frozenset()
    default_class: int | None = None

    def classify(self, raw: str) -> int | None:
        """Class index for a raw label, or None if the row is dropped."""
        if raw in self.mapping:
            return self.mapping[raw]
        if raw in self.dropped:
            return None
        if self.default_class is not None:
            return self.default_class
        raise UnknownLabelError(f"raw label {raw!r} is neither mapped nor dropped")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


# NSL-KDD attack-name groups. The grouping below reproduces the published
# per-class test counts (R2L 2885, Probe 2421, DoS 7460, U2R 67), which
# places httptunnel under R2L and worm under DoS.
_NSL_GROUPS = {
    "DoS": [
        "back", "land", "neptune", "pod", "smurf", "teardrop",
        "mailbomb", "apache2", "processtable", "udpstorm", "worm",
    ],
    "Probe": ["ipsweep", "nmap", "portsweep", "satan", "mscan", "saint"],
    "R2L": [
        "ftp_write", "guess_passwd", "imap", "multihop", "phf", "spy",
        "warezclient", "warezmaster", "sendmail", "named", "snmpgetattack",
        "snmpguess", "xlock", "xsnoop", "httptunnel",
    ],
    "U2R": [
        "buffer_overflow", "loadmodule", "perl", "rootkit",
        "ps", "sqlattack", "xterm",
    ],
}

_UNSW_MULTI_CLASSES = ("Normal", "DoS", "Reconnaissance", "Shellcode", "Worms")
_UNSW_DROPPED = frozenset(
    {"Fuzzers", "Analysis", "Backdoor", "Backdoors", "Exploits", "Generic"}
)


def builtin_label_scheme(dataset_id: str, mode: LabelMode | str) -> LabelScheme:
    mode = LabelMode(mode)
    if dataset_id == "nslkdd":
        if mode is LabelMode.BINARY:
            return LabelScheme(
                mode=mode,
                class_names=("Normal", "Attack"),
                mapping={"normal": 0},
                default_class=1,
            )
        class_names = ("Normal", "R2L", "Probe", "DoS", "U2R")
        mapping = {"normal": 0}
        for group, names in _NSL_GROUPS.items():
            idx = class_names.index(group)
            mapping.update({name: idx for name in names})
        return LabelScheme(mode=mode, class_names=class_names, mapping=mapping)
    if dataset_id == "unswnb15":
        if mode is LabelMode.BINARY:
            return LabelScheme(
                mode=mode,
                class_names=("Normal", "Attack"),
                mapping={"Normal": 0},
                default_class=1,
            )
        mapping = {name: i for i, name in enumerate(_UNSW_MULTI_CLASSES)}
        return LabelScheme(
            mode=mode,
            class_names=_UNSW_MULTI_CLASSES,
            mapping=mapping,
            dropped=_UNSW_DROPPED,
        )
    raise UnknownDatasetError(f"no builtin label scheme for {dataset_id!r}")


def _schema_from_doc(doc: dict, source: str) -> FeatureSchema:
    try:
        features = tuple(
            Feature(name=f["name"], kind=FeatureKind(f["kind"])) for f in doc["features"]
        )
        schema = FeatureSchema(
            dataset_id=doc["dataset_id"],
            features=features,
            label_column=doc["label_column"],
            excluded_columns=tuple(doc["excluded_columns"]),
            has_header=bool(doc["has_header"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaParseError(f"{source}: malformed schema document: {exc}") from exc
    validate_schema(schema, source=source)
    return schema


def validate_schema(schema: FeatureSchema, source: str = "<schema>") -> None:
    if not schema.features:
        raise SchemaValidationError(f"{source}: feature list is empty")
    names = [f.name for f in schema.features]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise SchemaValidationError(f"{source}: duplicate feature names {dupes}")
    if schema.label_column in names:
        raise SchemaValidationError(f"{source}: label column is also a feature")


def schema_to_doc(schema: FeatureSchema) -> dict:
    return {
        "dataset_id": schema.dataset_id,
        "features": [{"name": f.name, "kind": f.kind.value} for f in schema.features],
        "label_column": schema.label_column,
        "excluded_columns": list(schema.excluded_columns),
        "has_header": schema.has_header,
    }


def builtin_schema(dataset_id: str) -> FeatureSchema:
    """Shipped default schema for ``nslkdd`` or ``unswnb15``."""
    if dataset_id not in BUILTIN_DATASETS:
        raise UnknownDatasetError(f"no builtin schema for {dataset_id!r}")
    text = resources.files("flow2img.schemas").joinpath(f"{dataset_id}.json").read_text()
    return _schema_from_doc(json.loads(text), source=f"builtin:{dataset_id}")


def load_schema(path: str | Path) -> FeatureSchema:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise SchemaParseError(f"{path}: cannot read schema: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaParseError(f"{path}: invalid JSON: {exc}") from exc
    return _schema_from_doc(doc, source=str(path))


def save_schema(schema: FeatureSchema, path: str | Path) -> None:
    Path(path).write_text(json.dumps(schema_to_doc(schema), indent=2) + "\n")


def resolve_schema(source: str) -> FeatureSchema:
    """Accepts a builtin dataset id or a path to a schema document."""
    if source in BUILTIN_DATASETS:
        return builtin_schema(source)
    return load_schema(source)
