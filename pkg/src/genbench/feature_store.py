"""On-disk feature store: a directory holding manifest.json + data.bin.

data.bin is rows×cols little-endian float32, row-major, no header. The
manifest carries the shape, dtype tag, and per-row sample ids. Matrices
are upcast to float64 on read; metric math never runs in float32.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .metrics import FeatureMatrix, ProbabilityMatrix

SCHEMA_VERSION = 1
KIND_FEATURES = "features"
KIND_PROBABILITIES = "probabilities"


def write_store(path, matrix: FeatureMatrix | ProbabilityMatrix, ids=None) -> Path:
    """Write a matrix to `path` (created if needed); returns the directory."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    if isinstance(matrix, ProbabilityMatrix):
        kind = KIND_PROBABILITIES
        row_ids = ids if ids is not None else matrix.ids
    else:
        kind = KIND_FEATURES
        row_ids = ids if ids is not None else matrix.ids
    if row_ids is None:
        raise ValidationError("row ids are required to write a store")
    row_ids = [str(i) for i in row_ids]
    if len(row_ids) != matrix.rows:
        raise ValidationError(f"got {len(row_ids)} ids for {matrix.rows} rows")
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "dtype": "f32le",
        "rows": matrix.rows,
        "cols": matrix.cols,
        "order": "row-major",
        "ids": row_ids,
    }
    if kind == KIND_PROBABILITIES:
        manifest["kind"] = KIND_PROBABILITIES
    (root / "data.bin").write_bytes(
        np.ascontiguousarray(matrix.data, dtype="<f4").tobytes()
    )
    (root / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, separators=(",", ":")) + "\n"
    )
    return root


def _read_raw(path) -> tuple[dict, np.ndarray]:
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise ValidationError(f"no manifest.json under {root}")
    manifest = json.loads(manifest_path.read_text())
    for key in ("schema_version", "dtype", "rows", "cols", "order", "ids"):
        if key not in manifest:
            raise ValidationError(f"store manifest missing field {key!r}: {manifest_path}")
    if manifest["schema_version"] != SCHEMA_VERSION:
        raise ValidationError(f"unsupported store schema_version {manifest['schema_version']}")
    if manifest["dtype"] != "f32le" or manifest["order"] != "row-major":
        raise ValidationError(
            f"unsupported layout dtype={manifest['dtype']!r} order={manifest['order']!r}"
        )
    rows, cols = int(manifest["rows"]), int(manifest["cols"])
    raw = (root / "data.bin").read_bytes()
    expected = rows * cols * 4
    if len(raw) != expected:
        raise ValidationError(
            f"data.bin is {len(raw)} bytes, expected {expected} for {rows}x{cols} f32"
        )
    data = np.frombuffer(raw, dtype="<f4").reshape(rows, cols).astype(np.float64)
    return manifest, data


def read_feature_store(path) -> FeatureMatrix:
    manifest, data = _read_raw(path)
    if manifest.get("kind", KIND_FEATURES) != KIND_FEATURES:
        raise ValidationError(f"store at {path} holds {manifest['kind']!r}, not features")
    return FeatureMatrix(data=data, ids=tuple(manifest["ids"]))


def read_probability_store(path) -> ProbabilityMatrix:
    manifest, data = _read_raw(path)
    if manifest.get("kind") != KIND_PROBABILITIES:
        raise ValidationError(f"store at {path} does not hold probabilities")
    return ProbabilityMatrix(data=data, ids=tuple(manifest["ids"]))
