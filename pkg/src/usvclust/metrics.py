"""Inter-centroid distance statistics.

Quality of a clustering is summarized by the harmonic mean and the
population standard deviation of the pairwise cosine distances between
cluster centroids, each computed twice: once over inlier members only and
once with assigned outliers folded into the means.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .assign import ClusterModel
from .errors import ParameterError, ValidationError
from .preprocess import FeatureMatrix
from .spectral import cosine_gram

_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class MetricsReport:
    """Distance statistics for one clustering, plus the cluster sizes.

    cluster_sizes counts inlier members per cluster; cluster_sizes_full
    counts all members after outlier assignment.
    """

    k: int
    method: str
    d_cos_hmean: float
    d_cos_std: float
    d_cos_hmean_full: float
    d_cos_std_full: float
    cluster_sizes: tuple[int, ...]
    cluster_sizes_full: tuple[int, ...]

    def to_lines(self) -> list[str]:
        """Flat ``key=value`` lines, one per field."""
        return [
            f"method={self.method}",
            f"k={self.k}",
            "d_cos_hmean=" + _FLOAT_FMT % self.d_cos_hmean,
            "d_cos_std=" + _FLOAT_FMT % self.d_cos_std,
            "d_cos_hmean_full=" + _FLOAT_FMT % self.d_cos_hmean_full,
            "d_cos_std_full=" + _FLOAT_FMT % self.d_cos_std_full,
            "cluster_sizes=" + ",".join(str(s) for s in self.cluster_sizes),
            "cluster_sizes_full=" + ",".join(str(s) for s in self.cluster_sizes_full),
        ]

    @staticmethod
    def csv_header() -> str:
        return "method,k,d_cos_hmean,d_cos_std,d_cos_hmean_full,d_cos_std_full"

    def csv_row(self) -> str:
        return ",".join([
            self.method,
            str(self.k),
            _FLOAT_FMT % self.d_cos_hmean,
            _FLOAT_FMT % self.d_cos_std,
            _FLOAT_FMT % self.d_cos_hmean_full,
            _FLOAT_FMT % self.d_cos_std_full,
        ])


def write_report(rep: MetricsReport, path) -> None:
    with open(path, "w", newline="") as fh:
        for line in rep.to_lines():
            fh.write(line)
            fh.write("\n")


def pairwise_cosine_distances(cents: np.ndarray) -> np.ndarray:
    """Unordered pairwise distances 1 - cos(c_i, c_j), i < j, sorted.

    Sorting makes every downstream statistic independent of the arbitrary
    cluster numbering, down to the last bit.
    """
    cents = np.asarray(cents, dtype=np.float64)
    if cents.ndim != 2 or cents.shape[0] < 2:
        raise ParameterError("need a K x d matrix with K >= 2")
    g = cosine_gram(cents.T)
    iu = np.triu_indices(cents.shape[0], k=1)
    return np.sort(1.0 - g[iu])


def hmean_cosine_distance(cents: np.ndarray) -> float:
    """Harmonic mean of inter-centroid cosine distances.

    Averages 1/(1 - cos(c_i, c_j)) over all ordered pairs i != j and
    inverts. A parallel pair makes a term infinite; the limit value 0.0 is
    returned with a warning so parameter sweeps keep running.
    """
    d = pairwise_cosine_distances(cents)
    if np.any(d == 0.0):
        warnings.warn(
            "two centroids are parallel (cosine distance 0); harmonic mean "
            "collapses to 0",
            RuntimeWarning,
        )
        return 0.0
    # ordered pairs double each unordered term, so the 2s cancel:
    # K(K-1) / (2 * sum(1/d)) with sum over i < j.
    k = cents.shape[0]
    return k * (k - 1) / (2.0 * float((1.0 / d).sum()))


def std_cosine_distance(cents: np.ndarray) -> float:
    """Population standard deviation of the unordered pairwise distances."""
    return float(np.std(pairwise_cosine_distances(cents)))


def _sizes(labels: np.ndarray, k: int) -> tuple[int, ...]:
    return tuple(int(c) for c in np.bincount(labels, minlength=k))


def report(features: FeatureMatrix, model: ClusterModel) -> MetricsReport:
    """Compute both statistics for a finished model.

    Inlier-only values use the model's stored centroids; the "full" values
    recompute each centroid as the mean over every member the final
    labeling assigns to it, outliers included.
    """
    if model.k < 2:
        raise ParameterError(f"metrics need K >= 2 clusters, got {model.k}")
    sizes = _sizes(model.inlier_labels, model.k)
    if any(s == 0 for s in sizes):
        empty = next(c for c, s in enumerate(sizes) if s == 0)
        raise ValidationError(f"cluster {empty} has no inlier members")
    full_cents = np.empty_like(model.centroids)
    for c in range(model.k):
        members = np.flatnonzero(model.labels == c)
        full_cents[c] = features.data[:, members].mean(axis=1)
    return MetricsReport(
        k=model.k,
        method=model.method,
        d_cos_hmean=hmean_cosine_distance(model.centroids),
        d_cos_std=std_cosine_distance(model.centroids),
        d_cos_hmean_full=hmean_cosine_distance(full_cents),
        d_cos_std_full=std_cosine_distance(full_cents),
        cluster_sizes=sizes,
        cluster_sizes_full=_sizes(model.labels, model.k),
    )
