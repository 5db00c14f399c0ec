"""Lloyd's k-means with k-means++ seeding, plus a small PCA helper.

All restarts draw from one seeded generator, so a (points, k, seed) triple
fixes the result exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError


@dataclass(frozen=True)
class KMeansResult:
    """Labels, centers and the inertia trace of the winning restart."""

    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    inertia_trace: tuple[float, ...]


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: each next center is drawn with probability
    proportional to squared distance from the centers chosen so far."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total > 0:
            probs = d2 / total
            nxt = int(rng.choice(n, p=probs))
        else:
            nxt = int(rng.integers(n))
        centers[i] = points[nxt]
        d2 = np.minimum(d2, ((points - centers[i]) ** 2).sum(axis=1))
    return centers


def _assign(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def _repair_empty(points: np.ndarray, centers: np.ndarray,
                  labels: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the farthest point of the currently largest one."""
    labels = labels.copy()
    for e in range(k):
        if np.any(labels == e):
            continue
        counts = np.bincount(labels, minlength=k)
        g = int(np.argmax(counts))
        members = np.flatnonzero(labels == g)
        center_g = points[members].mean(axis=0)
        far = members[int(np.argmax(((points[members] - center_g) ** 2).sum(axis=1)))]
        labels[far] = e
        centers[e] = points[far]
    return labels


def _lloyd_once(points: np.ndarray, k: int, rng: np.random.Generator,
                max_iter: int):
    centers = _plus_plus_init(points, k, rng)
    labels = np.full(points.shape[0], -1)
    trace: list[float] = []
    converged = False
    iterations = 0
    for it in range(1, max_iter + 1):
        iterations = it
        new_labels = _assign(points, centers)
        new_labels = _repair_empty(points, centers, new_labels, k)
        for c in range(k):
            centers[c] = points[new_labels == c].mean(axis=0)
        inertia = float(((points - centers[new_labels]) ** 2).sum())
        trace.append(inertia)
        if np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
    return labels, centers, trace[-1], iterations, converged, tuple(trace)


def kmeans(points: np.ndarray, k: int, seed: int,
           max_iter: int = 300, n_init: int = 10) -> KMeansResult:
    """Cluster the rows of ``points`` into k groups.

    Parameters
    ----------
    points : (n, d) array
    k : number of clusters, 1 <= k <= n
    seed : seeds one generator shared by all restarts
    max_iter : Lloyd iteration cap per restart
    n_init : independent seedings; the lowest-inertia run wins

    Returns
    -------
    KMeansResult
        ``inertia_trace`` is the per-iteration inertia of the winning
        restart and never increases.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValidationError("points must be 2-D (one row per sample)")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ParameterError(f"k={k} out of range for {n} points")
    if n_init < 1 or max_iter < 1:
        raise ParameterError("n_init and max_iter must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        run = _lloyd_once(points, k, rng, max_iter)
        if best is None or run[2] < best[2]:
            best = run
    labels, centers, inertia, iterations, converged, trace = best
    return KMeansResult(labels=labels, centers=centers, inertia=inertia,
                        iterations=iterations, converged=converged,
                        inertia_trace=trace)


def pca_reduce(points: np.ndarray, target_dim: int) -> np.ndarray:
    """Project row vectors onto their top principal components."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValidationError("points must be 2-D")
    if not 1 <= target_dim <= min(points.shape):
        raise ParameterError(
            f"target_dim={target_dim} out of range for shape {points.shape}"
        )
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    return centered @ vt[:target_dim].T
