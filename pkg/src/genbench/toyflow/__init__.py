"""Closed-form 2D class-conditional flow generator and its adapter.

The generator transports standard Gaussian noise to per-class isotropic
Gaussian targets along the linear interpolant path, so Euler-step
sampling, guidance composition, and the resulting metric values are all
checkable analytically.
"""

from .model import GuidedField, ToyClassSpec, ToyMixture, cfg_velocity, conditional_velocity
from .sampling import analytic_frechet, analytic_stats, euler_sample, initial_noise

__all__ = [
    "GuidedField",
    "ToyClassSpec",
    "ToyMixture",
    "cfg_velocity",
    "conditional_velocity",
    "euler_sample",
    "initial_noise",
    "analytic_stats",
    "analytic_frechet",
]
