"""Generator-adapter entry point for the toy flow model.

Consumes the harness job file (model id, cfg, steps, seed, samples) and
produces one PNG per sample plus result.json. Reported NFE per sample is
n_steps for unguided sampling (w = 1) and 2·n_steps otherwise, since
guidance requires both field evaluations per step.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from ..errors import GenbenchError, ValidationError
from .imaging import write_sample_png
from .model import ToyMixture, cfg_velocity, load_toy_config
from .sampling import initial_noise


def _load_job(job_path) -> dict:
    try:
        job = json.loads(Path(job_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read job file {job_path}: {exc}") from exc
    for key in ("model_id", "cfg", "steps", "seed", "samples", "output_dir"):
        if key not in job:
            raise ValidationError(f"job file missing field {key!r}")
    if not isinstance(job["samples"], list) or not job["samples"]:
        raise ValidationError("job contains no samples")
    steps = job["steps"]
    if not (isinstance(steps, int) and steps >= 1):
        raise ValidationError(
            f"toy adapter requires a fixed integer step count >= 1, got {steps!r}"
        )
    cfg = job["cfg"]
    if cfg is not None and not (isinstance(cfg, (int, float)) and cfg >= 0):
        raise ValidationError(f"cfg must be null or a nonnegative number, got {cfg!r}")
    return job


def run_job(job: dict, mixture: ToyMixture) -> dict:
    """Generate all samples for a validated job; returns the result payload."""
    steps = int(job["steps"])
    w = 1.0 if job["cfg"] is None else float(job["cfg"])
    seed = int(job["seed"])
    out_dir = Path(job["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)

    samples = job["samples"]
    ids = [str(s["id"]) for s in samples]
    if len(set(ids)) != len(ids):
        raise ValidationError("job sample ids must be unique")
    class_ids = [int(s["class_id"]) for s in samples]
    for cid in set(class_ids):
        mixture.spec_for(cid)

    # noise is keyed to job position, then integrated per class group
    x = initial_noise(len(samples), seed)
    uncond = mixture.unconditional()
    dt = 1.0 / steps
    for cid in sorted(set(class_ids)):
        rows = np.flatnonzero(np.asarray(class_ids) == cid)
        spec = mixture.spec_for(cid)
        batch = x[rows]
        for k in range(steps):
            batch = batch + dt * cfg_velocity(batch, k / steps, w, spec, uncond)
        x[rows] = batch

    images = []
    for i, sample_id in enumerate(ids):
        filename = f"{sample_id}.png"
        write_sample_png(out_dir / filename, x[i])
        images.append({"id": sample_id, "file": filename})
    nfe_per_sample = steps * (1 if w == 1.0 else 2)
    return {
        "status": "success",
        "images": images,
        "nfe": [nfe_per_sample] * len(images),
    }


def adapter_main(job_path, mixture: ToyMixture) -> int:
    """Process one job file; returns a process exit code."""
    try:
        job = _load_job(job_path)
        result = run_job(job, mixture)
    except GenbenchError as exc:
        print(f"toy adapter error: {exc}", file=sys.stderr)
        return 1
    result_path = Path(job["output_dir"]) / "result.json"
    result_path.write_text(json.dumps(result, sort_keys=True, indent=2) + "\n")
    return 0


def main(argv=None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        prog="genbench-toy-adapter", description="Toy 2D flow generator adapter."
    )
    parser.add_argument("--config", required=True, help="toy mixture config JSON")
    parser.add_argument("job", help="job file to process")
    args = parser.parse_args(argv)
    try:
        mixture = load_toy_config(args.config)
    except GenbenchError as exc:
        print(f"toy adapter error: {exc}", file=sys.stderr)
        return 1
    return adapter_main(args.job, mixture)


if __name__ == "__main__":
    sys.exit(main())
