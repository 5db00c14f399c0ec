"""Turning raw segments into unit-norm feature vectors.

Each segment is background-clipped (cells below its mean are zeroed),
resized to a fixed F x T grid with bicubic interpolation, flattened
column by column and L2-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .ingest import SegmentArchive, SpectroSegment

KEYS_A = -0.5


@dataclass
class PreprocessConfig:
    """Target grid for resizing; 64 x 64 unless overridden."""

    f: int = 64
    t: int = 64

    def __post_init__(self):
        if self.f < 2 or self.t < 2:
            raise ParameterError(f"target grid must be at least 2x2, got {self.f}x{self.t}")


@dataclass(frozen=True)
class FeatureMatrix:
    """D x N matrix of unit-norm feature columns plus the sample ids."""

    data: np.ndarray
    ids: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ids", tuple(self.ids))
        if data.ndim != 2:
            raise ValidationError("feature data must be 2-D")
        if data.shape[1] != len(self.ids):
            raise ValidationError(
                f"{data.shape[1]} columns but {len(self.ids)} ids"
            )
        norms = np.linalg.norm(data, axis=0)
        if data.shape[1] and not np.allclose(norms, 1.0, atol=1e-8):
            worst = int(np.argmax(np.abs(norms - 1.0)))
            raise ValidationError(
                f"column {worst} ({self.ids[worst]!r}) has norm {norms[worst]!r}"
            )

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def select(self, idx) -> "FeatureMatrix":
        """Sub-matrix keeping the given sample indices, order preserved."""
        idx = np.asarray(idx, dtype=int)
        return FeatureMatrix(self.data[:, idx], tuple(self.ids[i] for i in idx))


def clip_below_mean(energy: np.ndarray) -> np.ndarray:
    """Zero every cell strictly below the mean of the whole matrix."""
    energy = np.asarray(energy, dtype=np.float64)
    return np.where(energy >= energy.mean(), energy, 0.0)


def keys_kernel(x) -> np.ndarray:
    """Cubic convolution kernel with a = -0.5; support (-2, 2)."""
    x = np.abs(np.asarray(x, dtype=np.float64))
    a = KEYS_A
    out = np.zeros_like(x)
    near = x <= 1.0
    far = (x > 1.0) & (x < 2.0)
    out[near] = ((a + 2.0) * x[near] - (a + 3.0)) * x[near] ** 2 + 1.0
    out[far] = (((x[far] - 5.0) * x[far] + 8.0) * x[far] - 4.0) * a
    return out


def _resize_weights(n_in: int, n_out: int) -> np.ndarray:
    """Row k holds the kernel taps mapping n_in source samples to output k.

    Source coordinates use pixel-center alignment; taps that fall outside
    the grid are clamped to the nearest edge sample (edge replication), so
    each row still sums to 1.
    """
    w = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for k in range(n_out):
        x = (k + 0.5) * scale - 0.5
        base = int(np.floor(x))
        for m in range(base - 1, base + 3):
            w[k, min(max(m, 0), n_in - 1)] += float(keys_kernel(x - m))
    return w


def resize_bicubic(energy: np.ndarray, f: int, t: int) -> np.ndarray:
    """Resize a nonnegative matrix to f x t; negative ringing is clamped to 0."""
    energy = np.asarray(energy, dtype=np.float64)
    if energy.ndim != 2:
        raise ValidationError("energy must be 2-D")
    if f < 2 or t < 2:
        raise ParameterError(f"target grid must be at least 2x2, got {f}x{t}")
    wf = _resize_weights(energy.shape[0], f)
    wt = _resize_weights(energy.shape[1], t)
    out = wf @ energy @ wt.T
    return np.maximum(out, 0.0)


def vectorize_segment(segment: SpectroSegment, config: PreprocessConfig) -> np.ndarray:
    """clip -> resize -> column-major flatten -> unit norm, for one segment."""
    resized = resize_bicubic(clip_below_mean(segment.energy), config.f, config.t)
    vec = resized.flatten(order="F")
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValidationError(
            f"segment {segment.id!r} is all zero after clipping; cannot normalize"
        )
    return vec / norm


def vectorize(archive: SegmentArchive, config: PreprocessConfig | None = None) -> FeatureMatrix:
    """Preprocess every segment in the archive, preserving order."""
    if config is None:
        config = PreprocessConfig()
    if len(archive) == 0:
        raise ValidationError("archive holds no segments")
    cols = [vectorize_segment(seg, config) for seg in archive.segments]
    return FeatureMatrix(np.column_stack(cols), archive.ids)


def normalize_columns(data: np.ndarray, ids) -> FeatureMatrix:
    """Build a FeatureMatrix from raw vectors by L2-normalizing each column."""
    data = np.asarray(data, dtype=np.float64)
    norms = np.linalg.norm(data, axis=0)
    if np.any(norms == 0.0):
        bad = int(np.argmin(norms))
        raise ValidationError(f"column {bad} ({list(ids)[bad]!r}) is all zero")
    return FeatureMatrix(data / norms, tuple(ids))
