"""MinMax Harmonic Mean: bounds-normalized composite of the four metrics.

Each metric is mapped to a utility in [0, ~1] against a persisted bounds
registry (orientation-aware, so lower-is-better FID and higher-is-better
IS/CLIP/PICK both normalize toward 1), then the composite is the harmonic
mean of the four utilities with a small epsilon keeping it defined when a
utility hits zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import InsufficientSamplesError, InvalidInputError, ValidationError
from .metrics import MetricReport

LOWER_IS_BETTER = "lower-is-better"
HIGHER_IS_BETTER = "higher-is-better"

METRIC_IDS = ("FID", "IS", "CLIP", "PICK")
METRIC_ORIENTATIONS = {
    "FID": LOWER_IS_BETTER,
    "IS": HIGHER_IS_BETTER,
    "CLIP": HIGHER_IS_BETTER,
    "PICK": HIGHER_IS_BETTER,
}

DEFAULT_EPSILON = 0.001

BOUNDS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MetricBounds:
    min: float
    max: float
    orientation: str

    def __post_init__(self):
        if self.orientation not in (LOWER_IS_BETTER, HIGHER_IS_BETTER):
            raise InvalidInputError(f"unknown orientation {self.orientation!r}")
        if not self.max > self.min:
            raise InvalidInputError(f"degenerate bounds: min={self.min}, max={self.max}")


@dataclass(frozen=True)
class BoundsRegistry:
    """Per-metric min/max + orientation used to normalize utilities."""

    metrics: Mapping[str, MetricBounds]
    dataset: str = ""
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        metrics = dict(self.metrics)
        for metric_id, bounds in metrics.items():
            expected = METRIC_ORIENTATIONS.get(metric_id)
            if expected is not None and bounds.orientation != expected:
                raise InvalidInputError(
                    f"{metric_id} must be {expected}, got {bounds.orientation}"
                )
        object.__setattr__(self, "metrics", metrics)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def __getitem__(self, metric_id: str) -> MetricBounds:
        try:
            return self.metrics[metric_id]
        except KeyError:
            raise InvalidInputError(f"metric {metric_id!r} not in bounds registry") from None


@dataclass(frozen=True)
class MmhmScore:
    """Composite value plus the four utilities it was computed from."""

    value: float
    utilities: Mapping[str, float]
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "utilities", dict(self.utilities))
        if not self.value > 0.0:
            raise InvalidInputError(f"composite must be positive, got {self.value}")


def normalize(metric_id: str, value: float, bounds: BoundsRegistry) -> float:
    """Utility of a raw metric value: 1 at the best bound, 0 at the worst.

    Floored at 0 but deliberately not capped above 1, so values beyond
    the registry's range (new datasets) still rank sensibly.
    """
    b = bounds[metric_id]
    span = b.max - b.min
    if b.orientation == LOWER_IS_BETTER:
        utility = (b.max - value) / span
    else:
        utility = (value - b.min) / span
    return max(0.0, utility)


def utilities_for(report: MetricReport, bounds: BoundsRegistry) -> dict[str, float]:
    return {
        "FID": normalize("FID", report.fid, bounds),
        "IS": normalize("IS", report.is_mean, bounds),
        "CLIP": normalize("CLIP", report.clip_score, bounds),
        "PICK": normalize("PICK", report.pick_score, bounds),
    }


def mmhm(
    report: MetricReport, bounds: BoundsRegistry, epsilon: float = DEFAULT_EPSILON
) -> MmhmScore:
    """Harmonic mean of the four utilities, each shifted by epsilon."""
    if epsilon <= 0.0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    utilities = utilities_for(report, bounds)
    value = 4.0 / sum(1.0 / (epsilon + u) for u in utilities.values())
    return MmhmScore(value=value, utilities=utilities, epsilon=epsilon)


def rank_configs(
    scored_runs: Sequence[tuple[object, MmhmScore, MetricReport]],
) -> list[tuple[object, MmhmScore, MetricReport]]:
    """Order runs best-first: full-precision composite, then lower FID, then key."""
    if not scored_runs:
        raise InvalidInputError("cannot rank an empty run list")
    return sorted(scored_runs, key=lambda item: (-item[1].value, item[2].fid, item[0]))


def compute_bounds(
    reports: Sequence[tuple[str, MetricReport]],
    exclusions: Sequence[str] = (),
    dataset: str = "",
) -> BoundsRegistry:
    """Per-metric min/max over the included reports, with provenance."""
    excluded = set(exclusions)
    included = [(key, rep) for key, rep in reports if key not in excluded]
    if len(included) < 2:
        raise InsufficientSamplesError(
            f"need at least 2 reports after exclusions, got {len(included)}"
        )
    columns = {
        "FID": [rep.fid for _, rep in included],
        "IS": [rep.is_mean for _, rep in included],
        "CLIP": [rep.clip_score for _, rep in included],
        "PICK": [rep.pick_score for _, rep in included],
    }
    metrics = {}
    for metric_id, values in columns.items():
        lo, hi = min(values), max(values)
        if not hi > lo:
            raise InvalidInputError(f"degenerate range for {metric_id}: all values equal {lo}")
        metrics[metric_id] = MetricBounds(
            min=lo, max=hi, orientation=METRIC_ORIENTATIONS[metric_id]
        )
    return BoundsRegistry(
        metrics=metrics, dataset=dataset, provenance=tuple(key for key, _ in included)
    )


def write_bounds(path, registry: BoundsRegistry) -> Path:
    payload = {
        "schema_version": BOUNDS_SCHEMA_VERSION,
        "dataset": registry.dataset,
        "metrics": {
            metric_id: {
                "min": b.min,
                "max": b.max,
                "orientation": b.orientation,
            }
            for metric_id, b in sorted(registry.metrics.items())
        },
        "provenance": list(registry.provenance),
    }
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return out


def read_bounds(path) -> BoundsRegistry:
    payload = json.loads(Path(path).read_text())
    if payload.get("schema_version") != BOUNDS_SCHEMA_VERSION:
        raise ValidationError(f"unsupported bounds schema_version in {path}")
    try:
        metrics = {
            metric_id: MetricBounds(
                min=float(entry["min"]),
                max=float(entry["max"]),
                orientation=str(entry["orientation"]),
            )
            for metric_id, entry in payload["metrics"].items()
        }
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed bounds file {path}: {exc}") from exc
    return BoundsRegistry(
        metrics=metrics,
        dataset=str(payload.get("dataset", "")),
        provenance=tuple(payload.get("provenance", ())),
    )
