"""Dataset manifests, feature-bundle files, and the judgment journal.

Everything on disk is JSON-lines with a schema header line; the exact field
names are pinned in docs/schemas.md and guarded by SCHEMA_VERSION. Parsing
failures raise ParseError; structural violations (wrong kind, unsupported
version, items missing required parts) raise SchemaVersionMismatch.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import ParseError, SchemaVersionMismatch, UnknownOption
from .stories import FeatureBundle, ImageSequence, Story

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Published split sizes for the full VIST dataset; checked as a warning when
# a manifest claims to be a full split.
VIST_SPLIT_SIZES = {"train": 40071, "val": 4988, "test": 5050}
VIST_SEQUENCE_LENGTH = 5
VWP_SEQUENCE_LENGTH_RANGE = (5, 10)

JUDGMENT_OPTIONS = ("first_better", "second_better", "both_fine", "both_bad")
VERDICTS = ("human_better", "model_better", "both_fine", "both_bad")
PRESENTATION_ORDERS = ("human_first", "model_first")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ManifestItem:
    sequence: ImageSequence
    human_story: Story
    model_stories: dict[str, Story] = field(default_factory=dict)


@dataclass(frozen=True)
class Manifest:
    dataset: str
    split: str
    items: tuple[ManifestItem, ...]

    @property
    def systems(self) -> list[str]:
        names: list[str] = []
        for item in self.items:
            for name in item.model_stories:
                if name not in names:
                    names.append(name)
        return names


@dataclass(frozen=True)
class Judgment:
    """One annotator's four-way verdict on a blinded story pair."""

    annotator_id: str
    sequence_id: str
    system: str
    option: str
    presentation_order: str
    timestamp: str

    def __post_init__(self):
        if self.option not in JUDGMENT_OPTIONS:
            raise UnknownOption(f"option {self.option!r} not in {JUDGMENT_OPTIONS}")
        if self.presentation_order not in PRESENTATION_ORDERS:
            raise ValueError(f"presentation order {self.presentation_order!r} "
                             f"not in {PRESENTATION_ORDERS}")

    def to_dict(self) -> dict[str, Any]:
        return {"annotator_id": self.annotator_id, "sequence_id": self.sequence_id,
                "system": self.system, "option": self.option,
                "presentation_order": self.presentation_order,
                "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Judgment":
        return cls(annotator_id=d["annotator_id"], sequence_id=d["sequence_id"],
                   system=d["system"], option=d["option"],
                   presentation_order=d["presentation_order"],
                   timestamp=d["timestamp"])


def resolve_verdict(option: str, presentation_order: str) -> str:
    """De-randomize a positional option into a canonical verdict.

    "first_better" under human-first presentation means the human story won;
    under model-first it means the model story won. The two tie options are
    position-free.
    """
    if option not in JUDGMENT_OPTIONS:
        raise UnknownOption(f"option {option!r} not in {JUDGMENT_OPTIONS}")
    if option in ("both_fine", "both_bad"):
        return option
    human_first = presentation_order == "human_first"
    if option == "first_better":
        return "human_better" if human_first else "model_better"
    return "model_better" if human_first else "human_better"


# ---------------------------------------------------------------------------
# JSON-lines helpers
# ---------------------------------------------------------------------------

def _read_jsonl(path: Path) -> Iterator[tuple[int, Any]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc


def _check_header(path: Path, header: Any, kind: str) -> dict[str, Any]:
    if not isinstance(header, dict) or "schema_version" not in header:
        raise SchemaVersionMismatch(f"{path}: first line is not a schema header")
    if header.get("kind") != kind:
        raise SchemaVersionMismatch(
            f"{path}: expected kind {kind!r}, got {header.get('kind')!r}"
        )
    if header["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"{path}: schema version {header['schema_version']} unsupported "
            f"(this build reads version {SCHEMA_VERSION})"
        )
    return header


def _dump(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


# ---------------------------------------------------------------------------
# Manifest files
# ---------------------------------------------------------------------------

def _image_available(ref, check_files: bool) -> bool:
    if not ref.available or not ref.uri:
        return False
    if check_files and "://" not in ref.uri:
        return Path(ref.uri).exists()
    return True


def _check_sequence_length(dataset: str, sequence: ImageSequence) -> None:
    name = dataset.lower()
    n = len(sequence.images)
    if name.startswith("vist") and n != VIST_SEQUENCE_LENGTH:
        logger.warning("%s: %d images (dataset family expects exactly %d)",
                       sequence.sequence_id, n, VIST_SEQUENCE_LENGTH)
    elif name.startswith("vwp") and not (VWP_SEQUENCE_LENGTH_RANGE[0] <= n
                                         <= VWP_SEQUENCE_LENGTH_RANGE[1]):
        logger.warning("%s: %d images (dataset family expects %d-%d)",
                       sequence.sequence_id, n, *VWP_SEQUENCE_LENGTH_RANGE)


def load_manifest(path: str | Path, check_files: bool = False) -> Manifest:
    """Read and validate a manifest file.

    Items whose sequence references an unavailable image are dropped with a
    warning (mirroring how unavailable images are excluded from the source
    datasets). Items without a human story are a schema violation.
    """
    path = Path(path)
    lines = _read_jsonl(path)
    try:
        _, header = next(lines)
    except StopIteration:
        raise SchemaVersionMismatch(f"{path}: empty manifest file") from None
    header = _check_header(path, header, "manifest")

    items: list[ManifestItem] = []
    dropped = 0
    for lineno, record in lines:
        if "human_story" not in record or record["human_story"] is None:
            raise SchemaVersionMismatch(f"{path}:{lineno}: manifest item has no human story")
        try:
            sequence = ImageSequence.from_dict(record["sequence"])
            human = Story.from_dict(record["human_story"])
            models = {name: Story.from_dict(s)
                      for name, s in record.get("model_stories", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaVersionMismatch(f"{path}:{lineno}: malformed item: {exc}") from exc
        if human.author != "human":
            raise SchemaVersionMismatch(
                f"{path}:{lineno}: human_story has author {human.author!r}"
            )
        if not all(_image_available(img, check_files) for img in sequence.images):
            dropped += 1
            logger.warning("excluding %s: unavailable image(s)", sequence.sequence_id)
            continue
        _check_sequence_length(header.get("dataset", ""), sequence)
        items.append(ManifestItem(sequence=sequence, human_story=human,
                                  model_stories=models))
    if dropped:
        logger.warning("dropped %d manifest item(s) with unavailable images", dropped)

    dataset, split = header.get("dataset", ""), header.get("split", "")
    if header.get("full_split") and dataset.lower().startswith("vist"):
        expected = VIST_SPLIT_SIZES.get(split)
        if expected is not None and len(items) != expected:
            logger.warning("manifest claims full VIST %s split but has %d items "
                           "(expected %d)", split, len(items), expected)
    return Manifest(dataset=dataset, split=split, items=tuple(items))


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump({"schema_version": SCHEMA_VERSION, "kind": "manifest",
                        "dataset": manifest.dataset, "split": manifest.split}) + "\n")
        for item in manifest.items:
            fh.write(_dump({
                "sequence": item.sequence.to_dict(),
                "human_story": item.human_story.to_dict(),
                "model_stories": {k: v.to_dict() for k, v in item.model_stories.items()},
            }) + "\n")


# ---------------------------------------------------------------------------
# Feature-bundle files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BundleFileMeta:
    embedding_dim: int
    extractor_version: str
    concreteness_lexicon_version: str


def read_bundles(path: str | Path) -> tuple[BundleFileMeta, dict[str, FeatureBundle]]:
    path = Path(path)
    lines = _read_jsonl(path)
    try:
        _, header = next(lines)
    except StopIteration:
        raise SchemaVersionMismatch(f"{path}: empty bundle file") from None
    header = _check_header(path, header, "feature_bundles")
    try:
        meta = BundleFileMeta(
            embedding_dim=int(header["embedding_dim"]),
            extractor_version=str(header["extractor_version"]),
            concreteness_lexicon_version=str(header["concreteness_lexicon_version"]),
        )
    except KeyError as exc:
        raise SchemaVersionMismatch(f"{path}: bundle header missing {exc}") from exc

    bundles: dict[str, FeatureBundle] = {}
    for lineno, record in lines:
        try:
            bundle = FeatureBundle.from_dict(record, embedding_dim=meta.embedding_dim)
        except (KeyError, TypeError) as exc:
            raise SchemaVersionMismatch(f"{path}:{lineno}: malformed bundle: {exc}") from exc
        if bundle.story_id in bundles:
            raise SchemaVersionMismatch(f"{path}:{lineno}: duplicate bundle for "
                                        f"story {bundle.story_id!r}")
        bundles[bundle.story_id] = bundle
    return meta, bundles


def write_bundles(bundles: Iterable[FeatureBundle], meta: BundleFileMeta,
                  path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump({"schema_version": SCHEMA_VERSION, "kind": "feature_bundles",
                        "embedding_dim": meta.embedding_dim,
                        "extractor_version": meta.extractor_version,
                        "concreteness_lexicon_version": meta.concreteness_lexicon_version}) + "\n")
        for bundle in bundles:
            if bundle.embedding_dim != meta.embedding_dim:
                raise ValueError(f"bundle {bundle.story_id!r} has dim "
                                 f"{bundle.embedding_dim}, file header says {meta.embedding_dim}")
            fh.write(_dump(bundle.to_dict()) + "\n")


# ---------------------------------------------------------------------------
# Threshold cache
# ---------------------------------------------------------------------------

def save_threshold(threshold, path: str | Path) -> None:
    from .grounding import CorpusThreshold  # local to avoid cycle at import time
    assert isinstance(threshold, CorpusThreshold)
    record = {"threshold_id": threshold.threshold_id, "tau": threshold.tau,
              "np_count": threshold.np_count, "source": threshold.source,
              "created_at": _utc_now()}
    Path(path).write_text(json.dumps(record, sort_keys=True, indent=2) + "\n",
                          encoding="utf-8")


def load_threshold(path: str | Path):
    from .grounding import CorpusThreshold
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid threshold file: {exc}") from exc
    return CorpusThreshold(threshold_id=record["threshold_id"], tau=record["tau"],
                           np_count=record["np_count"], source=record["source"])


# ---------------------------------------------------------------------------
# Judgment journal (append-only)
# ---------------------------------------------------------------------------

def append_judgment(judgment: Judgment, path: str | Path) -> None:
    """Append one judgment; the caller is responsible for serializing writers."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(_dump(judgment.to_dict()) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def read_journal(path: str | Path) -> list[Judgment]:
    path = Path(path)
    if not path.exists():
        return []
    return [Judgment.from_dict(record) for _, record in _read_jsonl(path)]


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
