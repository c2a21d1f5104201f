"""Manifest persistence: schema + layout + fitted statistics in one JSON
document. The manifest is the sole input needed to decode an image set.

Mean/std values are stored as shortest round-tripping decimal strings of the
64-bit doubles, so reloading is bit-stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from flow2img.errors import SchemaParseError
from flow2img.layout import LayoutSpec
from flow2img.schema import FeatureSchema, _schema_from_doc, schema_to_doc
from flow2img.stats import ContinuousStat, FittedStats, Vocabulary

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Manifest:
    schema: FeatureSchema
    layout: LayoutSpec
    stats: FittedStats
    created: str = ""
    source_hash: str = ""

    def to_doc(self) -> dict:
        stats_doc = {
            "fitted_on": self.stats.fitted_on,
            "continuous": [
                {
                    "name": name,
                    "mu": repr(st.mu),
                    "sigma": repr(st.sigma),
                    "epsilon": repr(st.epsilon),
                }
                for name, st in zip(self.schema.continuous_names, self.stats.continuous)
            ],
            "vocabularies": [
                {
                    "name": name,
                    "byte_width": v.byte_width,
                    # list position i holds the category with index i + 1
                    "categories": list(v.entries),
                }
                for name, v in zip(self.schema.categorical_names, self.stats.vocabs)
            ],
        }
        return {
            "format_version": FORMAT_VERSION,
            "created": self.created,
            "source_hash": self.source_hash,
            "layout": {"side": self.layout.side},
            "schema": schema_to_doc(self.schema),
            "stats": stats_doc,
        }

    def canonical_bytes(self, include_timestamp: bool = False) -> bytes:
        """Deterministic serialization for equality checks; the creation
        timestamp is excluded by default."""
        doc = self.to_doc()
        if not include_timestamp:
            doc.pop("created")
        return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def hash_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def make_manifest(
    schema: FeatureSchema,
    layout: LayoutSpec,
    stats: FittedStats,
    source_path: str | Path | None = None,
) -> Manifest:
    return Manifest(
        schema=schema,
        layout=layout,
        stats=stats,
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        source_hash=hash_file(source_path) if source_path else "",
    )


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest.to_doc(), indent=2) + "\n")


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise SchemaParseError(f"{path}: cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaParseError(f"{path}: invalid JSON: {exc}") from exc

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise SchemaParseError(
            f"{path}: unsupported manifest format_version {version!r} "
            f"(this build reads version {FORMAT_VERSION})"
        )
    try:
        schema = _schema_from_doc(doc["schema"], source=str(path))
        layout = LayoutSpec(side=int(doc["layout"]["side"]))
        sd = doc["stats"]
        continuous = tuple(
            ContinuousStat(
                mu=float(c["mu"]), sigma=float(c["sigma"]), epsilon=float(c["epsilon"])
            )
            for c in sd["continuous"]
        )
        vocabs = tuple(
            Vocabulary(entries={cat: i + 1 for i, cat in enumerate(v["categories"])})
            for v in sd["vocabularies"]
        )
        stats = FittedStats(
            continuous=continuous, vocabs=vocabs, fitted_on=sd["fitted_on"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaParseError(f"{path}: malformed manifest: {exc}") from exc

    for v, vdoc in zip(vocabs, sd["vocabularies"]):
        if v.byte_width != vdoc["byte_width"]:
            raise SchemaParseError(
                f"{path}: vocabulary {vdoc['name']!r} byte_width is inconsistent "
                "with its size"
            )
    return Manifest(
        schema=schema,
        layout=layout,
        stats=stats,
        created=doc.get("created", ""),
        source_hash=doc.get("source_hash", ""),
    )
