"""Cluster centroids and the final outlier assignment step.

After the inliers are clustered, each outlier joins the cluster whose
centroid it is most cosine-similar to; ties go to the lowest cluster index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .outlier_split import Partition
from .preprocess import FeatureMatrix


@dataclass(frozen=True)
class ClusterModel:
    """Full clustering outcome over all samples.

    labels has one entry per sample (inliers and outliers alike);
    inlier_labels is the inlier-only labeling in inlier order;
    centroids holds the k inlier-mean rows used for outlier assignment.
    feature_shape is the (F, T) grid features were flattened from, when known.
    """

    ids: tuple[str, ...]
    labels: np.ndarray
    centroids: np.ndarray
    partition: Partition
    k: int
    method: str
    inlier_labels: np.ndarray
    feature_shape: tuple[int, int] | None = None


def centroids(features: FeatureMatrix, labels: np.ndarray, k: int) -> np.ndarray:
    """Per-cluster means of the feature columns, as a k x d matrix.

    The means are plain averages; they are *not* re-normalized, so a
    centroid of unit vectors generally has norm below 1.
    """
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (features.n,):
        raise ValidationError("one label per feature column required")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValidationError(f"labels must lie in [0, {k}), got {labels.min()}..{labels.max()}")
    out = np.empty((k, features.d))
    for c in range(k):
        members = np.flatnonzero(labels == c)
        if members.size == 0:
            raise ValidationError(f"cluster {c} has no members")
        out[c] = features.data[:, members].mean(axis=1)
    return out


def assign_outliers(features: FeatureMatrix, partition: Partition,
                    inlier_labels: np.ndarray, k: int, method: str,
                    feature_shape: tuple[int, int] | None = None) -> ClusterModel:
    """Attach every outlier to its most cosine-similar inlier centroid."""
    inlier_labels = np.asarray(inlier_labels, dtype=int)
    if inlier_labels.shape != (len(partition.inlier_idx),):
        raise ValidationError("one label per inlier required")
    cents = centroids(features.select(partition.inlier_idx), inlier_labels, k)
    labels = np.empty(features.n, dtype=int)
    labels[partition.inlier_idx] = inlier_labels
    if len(partition.outlier_idx):
        cent_norms = np.linalg.norm(cents, axis=1)
        if np.any(cent_norms == 0.0):
            raise ValidationError(f"centroid {int(np.argmin(cent_norms))} is all zero")
        unit_cents = cents / cent_norms[:, None]
        for i in partition.outlier_idx:
            v = features.data[:, i]
            sims = unit_cents @ (v / np.linalg.norm(v))
            labels[i] = int(np.argmax(sims))
    return ClusterModel(
        ids=features.ids, labels=labels, centroids=cents, partition=partition,
        k=k, method=method, inlier_labels=inlier_labels,
        feature_shape=feature_shape,
    )
