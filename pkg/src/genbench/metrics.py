"""Core metric computations over feature and probability matrices.

Everything here is pure and operates in float64 regardless of how the
inputs were stored. Gaussian statistics are mergeable value objects so
feature batches can be accumulated independently and combined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InsufficientSamplesError,
    InvalidInputError,
    NotPSDError,
)

# Eigenvalues below -(PSD_FAIL_REL * largest + 1e-12) fail the PSD gate;
# surviving negatives are clamped to zero before taking square roots.
PSD_FAIL_REL = 1e-6
LOG_FLOOR = 1e-12


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-major sample-by-dimension matrix with per-row sample ids."""

    data: np.ndarray
    ids: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise InvalidInputError(f"features must be rank-2, got shape {data.shape}")
        if data.shape[0] < 1:
            raise InvalidInputError("features must contain at least 1 row")
        if not np.all(np.isfinite(data)):
            raise InvalidInputError("features contain non-finite values")
        ids = tuple(str(i) for i in self.ids)
        if len(ids) != data.shape[0]:
            raise InvalidInputError(
                f"got {len(ids)} ids for {data.shape[0]} rows"
            )
        if len(set(ids)) != len(ids):
            raise InvalidInputError("sample ids must be unique")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ids", ids)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Per-row class probability distributions (rows sum to one)."""

    data: np.ndarray
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] < 1:
            raise InvalidInputError(f"probability matrix must be rank-2 and nonempty, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidInputError("probabilities contain non-finite values")
        if np.any(data < 0.0) or np.any(data > 1.0):
            raise InvalidInputError("probabilities must lie in [0, 1]")
        sums = data.sum(axis=1)
        bad = np.abs(sums - 1.0) > 1e-6
        if np.any(bad):
            row = int(np.argmax(bad))
            raise InvalidInputError(f"row {row} sums to {sums[row]!r}, expected 1 within 1e-6")
        if self.ids is not None:
            ids = tuple(str(i) for i in self.ids)
            if len(ids) != data.shape[0]:
                raise InvalidInputError(f"got {len(ids)} ids for {data.shape[0]} rows")
            object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "data", data)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class GaussianStats:
    """Mean, unbiased covariance, and sample count of a feature batch."""

    mean: np.ndarray
    cov: np.ndarray
    n: int

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatchError(
                f"mean shape {mean.shape} incompatible with cov shape {cov.shape}"
            )
        if self.n < 2:
            raise InsufficientSamplesError(f"need n >= 2, got n={self.n}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InvalidInputError("statistics contain non-finite values")
        if not np.allclose(cov, cov.T, rtol=1e-9, atol=1e-12):
            raise InvalidInputError("covariance is not symmetric")
        if np.any(np.diag(cov) < -1e-12):
            raise InvalidInputError("covariance has a negative diagonal entry")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return int(self.mean.size)


@dataclass(frozen=True)
class MetricReport:
    """The four raw metric values for one (model, cfg, steps, dataset) run."""

    fid: float
    is_mean: float
    is_std: float
    clip_score: float
    pick_score: float

    def __post_init__(self):
        values = (self.fid, self.is_mean, self.is_std, self.clip_score, self.pick_score)
        if not all(np.isfinite(v) for v in values):
            raise InvalidInputError(f"metric report contains non-finite values: {values}")
        if self.fid < -1e-8:
            raise InvalidInputError(f"fid={self.fid} is significantly negative")
        object.__setattr__(self, "fid", max(0.0, float(self.fid)))


def accumulate_stats(features: FeatureMatrix) -> GaussianStats:
    """Sample mean and unbiased covariance of the feature rows."""
    if features.rows < 2:
        raise InsufficientSamplesError(f"need at least 2 rows, got {features.rows}")
    data = features.data
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / (features.rows - 1)
    return GaussianStats(mean=mean, cov=0.5 * (cov + cov.T), n=features.rows)


def merge_stats(first: GaussianStats, *rest: GaussianStats) -> GaussianStats:
    """Combine statistics of disjoint batches.

    Uses the pairwise mean/M2 update, so merging is associative and
    order-independent up to floating-point roundoff: the result matches
    accumulating the concatenated batches.
    """
    mean = first.mean.copy()
    m2 = first.cov * (first.n - 1)
    n = first.n
    for part in rest:
        if part.dim != first.dim:
            raise DimensionMismatchError(f"cannot merge dims {first.dim} and {part.dim}")
        total = n + part.n
        delta = part.mean - mean
        m2 = m2 + part.cov * (part.n - 1) + np.outer(delta, delta) * (n * part.n / total)
        mean = mean + delta * (part.n / total)
        n = total
    cov = m2 / (n - 1)
    return GaussianStats(mean=mean, cov=0.5 * (cov + cov.T), n=n)


def _psd_eigh(mat: np.ndarray, context: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a symmetric matrix, failing if it is far from PSD."""
    sym = 0.5 * (mat + mat.T)
    evals, evecs = np.linalg.eigh(sym)
    largest = max(float(evals[-1]), 0.0)
    floor = -(PSD_FAIL_REL * largest + 1e-12)
    if float(evals[0]) < floor:
        raise NotPSDError(
            f"{context}: eigenvalue {float(evals[0]):.6e} below tolerance {floor:.6e}"
        )
    return np.clip(evals, 0.0, None), evecs


def sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    """Symmetric square root of a numerically-PSD matrix."""
    evals, evecs = _psd_eigh(np.asarray(mat, dtype=np.float64), "sqrtm_psd")
    return (evecs * np.sqrt(evals)) @ evecs.T


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """Squared Fréchet distance between two Gaussian fits.

    d² = ‖μa − μb‖² + Tr(Σa + Σb − 2·(Σa^{1/2} Σb Σa^{1/2})^{1/2})

    The cross term is evaluated through the eigendecomposition of the
    symmetrized product, never the raw non-symmetric ΣaΣb. The result is
    floored at zero, and identical inputs return exactly zero.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if np.array_equal(a.mean, b.mean) and np.array_equal(a.cov, b.cov):
        return 0.0
    sqrt_a = sqrtm_psd(a.cov)
    inner_evals, _ = _psd_eigh(sqrt_a @ b.cov @ sqrt_a, "frechet_distance")
    trace_cross = float(np.sum(np.sqrt(inner_evals)))
    delta = a.mean - b.mean
    d2 = float(delta @ delta) + float(np.trace(a.cov) + np.trace(b.cov)) - 2.0 * trace_cross
    return max(0.0, d2)


def inception_score(probs: ProbabilityMatrix, splits: int = 10) -> tuple[float, float]:
    """Mean and population std of exp(avg KL(p(y|x) ‖ p̂(y))) over splits.

    The marginal p̂(y) is each split's column mean. Remainder rows go to
    the earliest splits; if there are fewer rows than splits, a single
    split is used.
    """
    if splits < 1:
        raise InvalidInputError(f"splits must be >= 1, got {splits}")
    effective = splits if probs.rows >= splits else 1
    scores = []
    for part in np.array_split(probs.data, effective):
        marginal = part.mean(axis=0)
        kl = part * (np.log(part + LOG_FLOOR) - np.log(marginal + LOG_FLOOR))
        scores.append(float(np.exp(kl.sum(axis=1).mean())))
    return float(np.mean(scores)), float(np.std(scores))


def _paired_cosines(image_embs: FeatureMatrix, text_embs: FeatureMatrix) -> np.ndarray:
    if image_embs.rows != text_embs.rows:
        raise DimensionMismatchError(
            f"row-count mismatch: {image_embs.rows} images vs {text_embs.rows} texts"
        )
    if image_embs.cols != text_embs.cols:
        raise DimensionMismatchError(
            f"embedding width mismatch: {image_embs.cols} vs {text_embs.cols}"
        )
    return np.sum(
        _unit_rows(image_embs.data, "image") * _unit_rows(text_embs.data, "text"),
        axis=1,
    )


def _unit_rows(data: np.ndarray, label: str) -> np.ndarray:
    norms = np.linalg.norm(data, axis=1)
    if np.any(norms == 0.0):
        rows = np.flatnonzero(norms == 0.0).tolist()
        raise InvalidInputError(f"zero-norm {label} embedding at row(s) {rows}")
    return data / norms[:, None]


def clip_score(image_embs: FeatureMatrix, text_embs: FeatureMatrix) -> float:
    """Mean of 100·max(0, cos) over paired image/text embedding rows."""
    cosines = _paired_cosines(image_embs, text_embs)
    return float(np.mean(100.0 * np.maximum(0.0, cosines)))


def pick_score(
    image_embs: FeatureMatrix, text_embs: FeatureMatrix, logit_scale: float = 100.0
) -> float:
    """Mean of logit_scale·cos over paired rows, without clamping."""
    if logit_scale <= 0.0:
        raise InvalidInputError(f"logit_scale must be positive, got {logit_scale}")
    return float(np.mean(logit_scale * _paired_cosines(image_embs, text_embs)))


def pick_score_precomputed(scores) -> float:
    """Arithmetic mean of externally computed per-image preference scores."""
    values = np.asarray(list(scores), dtype=np.float64)
    if values.size == 0:
        raise InvalidInputError("no precomputed scores supplied")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("precomputed scores contain non-finite values")
    return float(values.mean())
