"""Class specs and velocity fields for the 2D toy generator."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidInputError, ValidationError

UNCONDITIONAL_CLASS_ID = -1


@dataclass(frozen=True)
class ToyClassSpec:
    """One class target N(mean, scale²·I) with its mixture weight."""

    class_id: int
    class_name: str
    mean: np.ndarray
    scale: float
    weight: float

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        if mean.shape != (2,):
            raise InvalidInputError(f"class mean must be a 2-vector, got shape {mean.shape}")
        if not np.all(np.isfinite(mean)):
            raise InvalidInputError("class mean must be finite")
        if not (np.isfinite(self.scale) and self.scale > 0.0):
            raise InvalidInputError(f"scale must be a positive real, got {self.scale}")
        if not (np.isfinite(self.weight) and self.weight > 0.0):
            raise InvalidInputError(f"weight must be a positive real, got {self.weight}")
        object.__setattr__(self, "mean", mean)


class ToyMixture:
    """The class mixture plus its moment-matched unconditional target."""

    def __init__(self, classes):
        classes = tuple(classes)
        if not classes:
            raise InvalidInputError("mixture needs at least one class")
        ids = [c.class_id for c in classes]
        names = [c.class_name for c in classes]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("class ids must be unique")
        if len(set(names)) != len(names) or any(not n for n in names):
            raise InvalidInputError("class names must be unique and nonempty")
        total = sum(c.weight for c in classes)
        if abs(total - 1.0) > 1e-9:
            raise InvalidInputError(f"class weights must sum to 1, got {total!r}")
        self.classes = classes
        self._by_id = {c.class_id: c for c in classes}

    def spec_for(self, class_id: int) -> ToyClassSpec:
        try:
            return self._by_id[class_id]
        except KeyError:
            raise InvalidInputError(f"unknown class id {class_id}") from None

    def unconditional(self) -> ToyClassSpec:
        """Isotropic Gaussian matching the mixture's mean and total variance.

        The per-axis variance is half the expected squared distance from
        the mixture mean, so the 2D trace matches exactly.
        """
        mean = np.zeros(2)
        for c in self.classes:
            mean += c.weight * c.mean
        total_var = 0.0
        for c in self.classes:
            offset = c.mean - mean
            total_var += c.weight * (2.0 * c.scale**2 + float(offset @ offset))
        return ToyClassSpec(
            class_id=UNCONDITIONAL_CLASS_ID,
            class_name="__unconditional__",
            mean=mean,
            scale=float(np.sqrt(total_var / 2.0)),
            weight=1.0,
        )


def conditional_velocity(x, t: float, spec: ToyClassSpec) -> np.ndarray:
    """Marginal velocity of the linear interpolant toward N(m, s²·I).

    With μ_t = t·m and σ_t = sqrt((1−t)² + t²s²), the field is
    (σ̇_t/σ_t)·(x − μ_t) + m. Accepts a single 2-vector or an (n, 2)
    batch; rows are independent.
    """
    if not 0.0 <= t < 1.0:
        raise InvalidInputError(f"t must lie in [0, 1), got {t}")
    x = np.asarray(x, dtype=np.float64)
    s2 = spec.scale * spec.scale
    sigma_sq = (1.0 - t) ** 2 + t * t * s2
    # σ̇/σ = ((t·s² − (1−t))/σ) / σ
    ratio = (-(1.0 - t) + t * s2) / sigma_sq
    return ratio * (x - t * spec.mean) + spec.mean


def cfg_velocity(x, t: float, w: float, spec: ToyClassSpec, uncond: ToyClassSpec) -> np.ndarray:
    """Guided field v_u + w·(v_c − v_u); w=1 is the no-guidance baseline.

    w == 1 and w == 0 return the conditional/unconditional evaluation
    directly so those cases are bitwise-identical to the underlying field.
    """
    if not (np.isfinite(w) and w >= 0.0):
        raise InvalidInputError(f"guidance weight must be >= 0, got {w}")
    if w == 1.0:
        return conditional_velocity(x, t, spec)
    if w == 0.0:
        return conditional_velocity(x, t, uncond)
    v_u = conditional_velocity(x, t, uncond)
    v_c = conditional_velocity(x, t, spec)
    return v_u + w * (v_c - v_u)


@dataclass(frozen=True)
class GuidedField:
    """A conditional/unconditional field pair with a guidance weight."""

    cond: ToyClassSpec
    uncond: ToyClassSpec
    weight: float

    def __post_init__(self):
        if not (np.isfinite(self.weight) and self.weight >= 0.0):
            raise InvalidInputError(f"guidance weight must be >= 0, got {self.weight}")

    def velocity(self, x, t: float) -> np.ndarray:
        return cfg_velocity(x, t, self.weight, self.cond, self.uncond)

    @property
    def nfe_per_step(self) -> int:
        # collapsing to a single field needs one evaluation; guidance needs both
        return 1 if self.weight == 1.0 else 2


def load_toy_config(path) -> ToyMixture:
    """Load a class-mixture config file.

    Format: {"classes": [{"class_id", "class_name", "mean": [x, y],
    "scale", "weight"}, ...]}. Only scalar (isotropic) scales are
    accepted.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read toy config {path}: {exc}") from exc
    if not isinstance(payload, dict) or "classes" not in payload:
        raise ValidationError(f"toy config {path} must be an object with a 'classes' list")
    specs = []
    for i, entry in enumerate(payload["classes"]):
        try:
            if not isinstance(entry["scale"], (int, float)):
                raise ValidationError(
                    f"class {i}: scale must be a scalar (anisotropic targets are not supported)"
                )
            specs.append(
                ToyClassSpec(
                    class_id=int(entry["class_id"]),
                    class_name=str(entry["class_name"]),
                    mean=np.asarray(entry["mean"], dtype=np.float64),
                    scale=float(entry["scale"]),
                    weight=float(entry["weight"]),
                )
            )
        except (KeyError, TypeError, ValueError, InvalidInputError) as exc:
            raise ValidationError(f"toy config {path}, class {i}: {exc}") from exc
    try:
        return ToyMixture(specs)
    except InvalidInputError as exc:
        raise ValidationError(f"toy config {path}: {exc}") from exc
