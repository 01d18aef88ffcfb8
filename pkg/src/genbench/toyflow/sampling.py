"""Seeded Euler sampling and closed-form distance oracles."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from ..metrics import GaussianStats, frechet_distance
from .model import ToyClassSpec, ToyMixture, cfg_velocity


def initial_noise(n_samples: int, seed: int) -> np.ndarray:
    """Standard-normal starting points, seeded per sample.

    Sample i draws from a generator keyed by (seed, i), so any partition
    of the index range across workers reproduces the same matrix.
    """
    if n_samples < 1:
        raise InvalidInputError(f"n_samples must be >= 1, got {n_samples}")
    out = np.empty((n_samples, 2), dtype=np.float64)
    for i in range(n_samples):
        out[i] = np.random.default_rng([seed, i]).standard_normal(2)
    return out


def euler_sample(
    mixture: ToyMixture,
    class_id: int,
    n_steps: int,
    n_samples: int,
    w: float,
    seed: int,
) -> np.ndarray:
    """Integrate the guided field with left-endpoint Euler on t_k = k/n_steps."""
    if n_steps < 1:
        raise InvalidInputError(f"n_steps must be >= 1, got {n_steps}")
    spec = mixture.spec_for(class_id)
    uncond = mixture.unconditional()
    x = initial_noise(n_samples, seed)
    dt = 1.0 / n_steps
    for k in range(n_steps):
        x = x + dt * cfg_velocity(x, k / n_steps, w, spec, uncond)
    return x


def analytic_stats(spec: ToyClassSpec) -> GaussianStats:
    """Exact first/second moments of the class target N(m, s²·I)."""
    return GaussianStats(mean=spec.mean, cov=spec.scale**2 * np.eye(2), n=2)


def analytic_frechet(spec: ToyClassSpec, empirical: GaussianStats) -> float:
    """Squared Fréchet distance between the class target and empirical stats."""
    if empirical.dim != 2:
        raise InvalidInputError(f"expected 2D stats, got dim {empirical.dim}")
    return frechet_distance(analytic_stats(spec), empirical)
