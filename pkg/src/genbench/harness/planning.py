"""Sweep planning: CFG × step grids over models and datasets."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import InvalidInputError, ValidationError
from .refdata import RefDataset

DEFAULT_CFG_VALUES = (1.0, 3.0, 6.0, 7.0, 9.0, 12.0, 15.0)
DEFAULT_STEP_VALUES = (1, 5, 10, 15, 20, 25)
DYNAMIC_STEPS = "dynamic"
DEFAULT_SEED = 42

FAMILY_DEFAULT = "default"
FAMILY_CONVERSATIONAL = "conversational"

PROMPT_TEMPLATES = {
    FAMILY_DEFAULT: "a photo of a {class_name}",
    FAMILY_CONVERSATIONAL: "Can you generate a photo of a {class_name}?",
}


def render_prompt(model_family: str, class_name: str) -> str:
    """Prompt text for one class; label ids travel separately in the job file."""
    if not class_name:
        raise InvalidInputError("class name must be nonempty")
    template = PROMPT_TEMPLATES.get(model_family)
    if template is None:
        raise InvalidInputError(f"unknown model family {model_family!r}")
    return template.format(class_name=class_name)


def format_cfg(cfg: float | None) -> str:
    return "none" if cfg is None else f"{cfg:g}"


@dataclass(frozen=True)
class ModelSpec:
    """Adapter description: how to invoke it and what it can accept."""

    model_id: str
    command: tuple[str, ...]
    family: str = FAMILY_DEFAULT
    fixed_cfg: float | None = None
    dynamic_steps: bool = False

    def __post_init__(self):
        if not self.model_id:
            raise InvalidInputError("model_id must be nonempty")
        if self.family not in PROMPT_TEMPLATES:
            raise InvalidInputError(f"unknown model family {self.family!r}")
        object.__setattr__(self, "command", tuple(str(c) for c in self.command))


@dataclass(frozen=True)
class RunKey:
    model_id: str
    cfg: float | None
    steps: int | str
    dataset: str
    seed: int

    def slug(self) -> str:
        return (
            f"{self.model_id}_{self.dataset}_cfg{format_cfg(self.cfg)}"
            f"_steps{self.steps}_seed{self.seed}"
        )

    def __lt__(self, other):  # lexicographic on the slug, mixed types aside
        return self.slug() < other.slug()


@dataclass(frozen=True)
class RunSpec:
    """Everything one generation run needs, bound to a reference dataset."""

    model_id: str
    cfg: float | None
    steps: int | str
    seed: int
    dataset: str
    class_plan: tuple[tuple[str, int, str], ...]
    prompt_template: str
    output_dir: str

    def __post_init__(self):
        if not self.class_plan:
            raise InvalidInputError("class plan must contain at least one entry")
        if self.steps != DYNAMIC_STEPS and not (
            isinstance(self.steps, int) and self.steps >= 1
        ):
            raise InvalidInputError(f"steps must be >= 1 or {DYNAMIC_STEPS!r}, got {self.steps!r}")
        object.__setattr__(
            self,
            "class_plan",
            tuple((str(i), int(c), str(n)) for i, c, n in self.class_plan),
        )

    def run_key(self) -> RunKey:
        return RunKey(
            model_id=self.model_id,
            cfg=self.cfg,
            steps=self.steps,
            dataset=self.dataset,
            seed=self.seed,
        )

    def prompts(self) -> tuple[str, ...]:
        return tuple(
            self.prompt_template.format(class_name=name) for _, _, name in self.class_plan
        )


@dataclass(frozen=True)
class SweepPlan:
    models: tuple[ModelSpec, ...]
    datasets: tuple[str, ...]
    cfg_values: tuple[float, ...] = DEFAULT_CFG_VALUES
    step_values: tuple[int | str, ...] = DEFAULT_STEP_VALUES
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.models or not self.datasets:
            raise InvalidInputError("sweep needs at least one model and one dataset")
        if not self.cfg_values:
            raise InvalidInputError("cfg grid is empty")
        if any(c < 1.0 for c in self.cfg_values):
            raise InvalidInputError(f"cfg values must be >= 1, got {self.cfg_values}")
        if not self.step_values:
            raise InvalidInputError("step grid is empty")
        for s in self.step_values:
            if s != DYNAMIC_STEPS and not (isinstance(s, int) and s >= 1):
                raise InvalidInputError(f"step values must be >= 1 or dynamic, got {s!r}")


def plan_sweep(
    plan: SweepPlan, datasets: Mapping[str, RefDataset], out_root
) -> list[RunSpec]:
    """Expand the grid to concrete RunSpecs in deterministic order.

    Fixed-CFG models keep only matching grid points; dynamic-step models
    collapse the step axis to the dynamic marker.
    """
    out_root = Path(out_root)
    for ds_id in plan.datasets:
        if ds_id not in datasets:
            raise ValidationError(f"unknown dataset {ds_id!r}")
    specs: list[RunSpec] = []
    for model in plan.models:
        cfgs = [c for c in plan.cfg_values if model.fixed_cfg is None or c == model.fixed_cfg]
        steps_axis = (DYNAMIC_STEPS,) if model.dynamic_steps else plan.step_values
        template = PROMPT_TEMPLATES[model.family]
        for cfg in cfgs:
            for steps in steps_axis:
                for ds_id in plan.datasets:
                    dataset = datasets[ds_id]
                    key = RunKey(model.model_id, cfg, steps, ds_id, plan.seed)
                    specs.append(
                        RunSpec(
                            model_id=model.model_id,
                            cfg=cfg,
                            steps=steps,
                            seed=plan.seed,
                            dataset=ds_id,
                            class_plan=dataset.class_plan(),
                            prompt_template=template,
                            output_dir=str(out_root / key.slug()),
                        )
                    )
    if not specs:
        raise ValidationError("sweep grid is empty after applying model capabilities")
    return specs
