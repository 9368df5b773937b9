"""Dataset manifests: which recordings exist, their labels and splits.

A manifest is a JSON document ({"entries": [...]}) or a CSV file with
columns id,audio_path,label,split.  Relative audio paths resolve against
the manifest's own directory.  The access-restricted benchmark corpus is
never redistributed; ``convert_adresso_layout`` maps its diagnosis-folder
layout to a manifest for licensed holders.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

TRAIN = "train"
TEST = "test"
LABELS = ("ad", "cn")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    audio_path: Path
    split: str
    label: str | None = None


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry]

    def split(self, name: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == name]

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entries]

    def entry(self, entry_id: str) -> ManifestEntry:
        for e in self.entries:
            if e.id == entry_id:
                return e
        raise ManifestError(f"unknown recording id {entry_id!r}")

    def counts(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for e in self.entries:
            bucket = out.setdefault(e.split, {})
            key = e.label or "unlabeled"
            bucket[key] = bucket.get(key, 0) + 1
        return out


def _build(rows: list[dict], base_dir: Path) -> DatasetManifest:
    entries = []
    seen: set[str] = set()
    for row in rows:
        entry_id = str(row.get("id") or "").strip()
        audio = str(row.get("audio_path") or "").strip()
        split = str(row.get("split") or "").strip()
        label = row.get("label")
        label = str(label).strip().lower() if label not in (None, "") else None

        if not entry_id:
            raise ManifestError("entry with empty id")
        if entry_id in seen:
            raise ManifestError(f"duplicate id {entry_id!r}")
        seen.add(entry_id)
        if split not in (TRAIN, TEST):
            raise ManifestError(f"{entry_id}: split must be train or test, got {split!r}")
        if label is not None and label not in LABELS:
            raise ManifestError(f"{entry_id}: label must be ad or cn, got {label!r}")
        if split == TRAIN and label is None:
            raise ManifestError(f"{entry_id}: train entries need a label")

        path = Path(audio)
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise ManifestError(f"{entry_id}: audio file not found: {path}")
        entries.append(ManifestEntry(id=entry_id, audio_path=path,
                                     split=split, label=label))
    if not entries:
        raise ManifestError("manifest has no entries")
    return DatasetManifest(entries=entries)


def load_manifest(path: str | Path) -> DatasetManifest:
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as handle:
            rows = list(csv.DictReader(handle))
    else:
        payload = json.loads(path.read_text())
        rows = payload.get("entries", [])
    return _build(rows, base)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    from .schemas import validate

    payload = {
        "entries": [
            {
                "id": e.id,
                "audio_path": str(e.audio_path),
                "label": e.label,
                "split": e.split,
            }
            for e in manifest.entries
        ]
    }
    validate(payload, "manifest")
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True))


def convert_adresso_layout(root: str | Path) -> DatasetManifest:
    """Map the diagnosis-folder layout to a manifest.

    Expected layout under ``root``:
        train/audio/ad/*.wav   labeled positive training recordings
        train/audio/cn/*.wav   labeled control training recordings
        test*/audio/*.wav      unlabeled holdout recordings (any dir
                               whose name starts with 'test')
    """
    root = Path(root)
    if not root.is_dir():
        raise ManifestError(f"dataset root not found: {root}")
    entries: list[ManifestEntry] = []
    for label in LABELS:
        for wav in sorted((root / "train" / "audio" / label).glob("*.wav")):
            entries.append(ManifestEntry(id=wav.stem, audio_path=wav,
                                         split=TRAIN, label=label))
    for test_dir in sorted(root.glob("test*")):
        for wav in sorted((test_dir / "audio").glob("*.wav")):
            entries.append(ManifestEntry(id=wav.stem, audio_path=wav, split=TEST))
    if not entries:
        raise ManifestError(f"no recordings found under {root}")
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ManifestError("duplicate recording stems across the layout")
    return DatasetManifest(entries=entries)
