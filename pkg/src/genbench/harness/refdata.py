"""Reference dataset directory format.

A dataset lives under <root>/<dataset_id>/ with a dataset.json listing
classes and examples, plus one feature store per backend id under
features/<backend_id>/ holding the reference features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import ValidationError

DATASET_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RefExample:
    id: str
    class_id: int


@dataclass(frozen=True)
class RefDataset:
    dataset_id: str
    classes: tuple[tuple[int, str], ...]
    examples: tuple[RefExample, ...]
    root: Path

    def class_name(self, class_id: int) -> str:
        for cid, name in self.classes:
            if cid == class_id:
                return name
        raise ValidationError(f"dataset {self.dataset_id}: unknown class id {class_id}")

    def class_plan(self) -> tuple[tuple[str, int, str], ...]:
        """(example_id, class_id, class_name) per reference example, in order."""
        names = dict(self.classes)
        return tuple(
            (ex.id, ex.class_id, names[ex.class_id]) for ex in self.examples
        )

    def feature_store_path(self, backend_id: str) -> Path:
        return self.root / "features" / backend_id


def dataset_dir(root, dataset_id: str) -> Path:
    return Path(root) / dataset_id


def write_dataset(root, dataset_id: str, classes, examples) -> Path:
    """Write dataset.json; feature stores are added separately."""
    out = dataset_dir(root, dataset_id)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "schema_version": DATASET_SCHEMA_VERSION,
        "id": dataset_id,
        "classes": [{"class_id": cid, "class_name": name} for cid, name in classes],
        "examples": [{"id": ex_id, "class_id": cid} for ex_id, cid in examples],
    }
    (out / "dataset.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return out


def load_dataset(root, dataset_id: str) -> RefDataset:
    path = dataset_dir(root, dataset_id) / "dataset.json"
    if not path.is_file():
        raise ValidationError(f"unknown dataset {dataset_id!r}: no {path}")
    try:
        payload = json.loads(path.read_text())
        if payload.get("schema_version") != DATASET_SCHEMA_VERSION:
            raise ValidationError(f"unsupported dataset schema_version in {path}")
        classes = tuple(
            (int(c["class_id"]), str(c["class_name"])) for c in payload["classes"]
        )
        examples = tuple(
            RefExample(id=str(e["id"]), class_id=int(e["class_id"]))
            for e in payload["examples"]
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed dataset file {path}: {exc}") from exc
    if not examples:
        raise ValidationError(f"dataset {dataset_id!r} lists no examples")
    known = {cid for cid, _ in classes}
    for ex in examples:
        if ex.class_id not in known:
            raise ValidationError(
                f"dataset {dataset_id!r}: example {ex.id} references unknown class {ex.class_id}"
            )
    ids = [ex.id for ex in examples]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"dataset {dataset_id!r} has duplicate example ids")
    return RefDataset(
        dataset_id=dataset_id,
        classes=classes,
        examples=examples,
        root=dataset_dir(root, dataset_id),
    )
