"""Cosine geometry, affinity construction and spectral embedding.

Clustering uses the random-walk normalized Laplacian L_rw = I - D^-1 A.
Its eigenpairs are obtained from the symmetric form
L_sym = I - D^-1/2 A D^-1/2: if L_sym u = w u then v = D^-1/2 u solves
L_rw v = w v, which keeps the eigensolve on a symmetric matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError, ValidationError

_COS_SNAP = 1e-12


def cosine_gram(data: np.ndarray) -> np.ndarray:
    """All-pairs cosine similarity of the columns of ``data``.

    The result is exactly symmetric, clipped to [-1, 1], and values within
    1e-12 of 1 are snapped to exactly 1.0 so duplicate columns always
    compare as identical despite rounding.

    Parameters
    ----------
    data : (d, n) array
        Column vectors; zero columns are rejected.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValidationError("data must be 2-D")
    norms = np.linalg.norm(data, axis=0)
    if np.any(norms == 0.0):
        raise ValidationError(f"column {int(np.argmin(norms))} is all zero")
    unit = data / norms
    g = unit.T @ unit
    g = (g + g.T) / 2.0
    g = np.clip(g, -1.0, 1.0)
    g[g > 1.0 - _COS_SNAP] = 1.0
    return g


def affinity_from_cosine(gram: np.ndarray) -> np.ndarray:
    """Cosine-similarity affinity: negatives floored at 0, zero diagonal."""
    a = np.maximum(np.asarray(gram, dtype=np.float64), 0.0)
    a = (a + a.T) / 2.0
    np.fill_diagonal(a, 0.0)
    return a


def affinity_from_coefficients(y: np.ndarray) -> np.ndarray:
    """Symmetrized self-expression affinity A = |Y| + |Y|^T."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise ValidationError("coefficient matrix must be square")
    if np.any(np.diag(y) != 0.0):
        raise ValidationError("coefficient matrix must have a zero diagonal")
    ay = np.abs(y)
    return ay + ay.T


@dataclass(frozen=True)
class SpectralEmbedding:
    """First k eigenvectors of L_rw (as columns) and their eigenvalues."""

    coords: np.ndarray
    eigenvalues: np.ndarray


def laplacian_spectrum(affinity: np.ndarray) -> np.ndarray:
    """All eigenvalues of L_rw for ``affinity``, ascending."""
    _, w = _eig_lrw(affinity)
    return w


def embed(affinity: np.ndarray, k: int) -> SpectralEmbedding:
    """Embed samples as the k smallest-eigenvalue eigenvectors of L_rw."""
    a = np.asarray(affinity, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("affinity must be square")
    if k < 1 or k > a.shape[0]:
        raise ParameterError(f"k={k} out of range for {a.shape[0]} samples")
    u, w = _eig_lrw(a, return_vectors=True)
    return SpectralEmbedding(coords=u[:, :k], eigenvalues=w[:k])


def _eig_lrw(affinity: np.ndarray, return_vectors: bool = False):
    a = np.asarray(affinity, dtype=np.float64)
    if np.any(a < 0):
        raise ValidationError("affinity must be nonnegative")
    deg = a.sum(axis=1)
    if np.any(deg <= 0):
        bad = int(np.argmin(deg))
        raise ValidationError(
            f"sample {bad} has zero affinity degree; treat it as an outlier"
        )
    s = 1.0 / np.sqrt(deg)
    # s[i]*a[ij]*s[j] is exactly symmetric because each product commutes.
    m = a * np.outer(s, s)
    lsym = np.eye(a.shape[0]) - m
    try:
        if return_vectors:
            w, u = np.linalg.eigh(lsym)
            return s[:, None] * u, w
        return None, np.linalg.eigvalsh(lsym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc


def spectral_cluster(affinity: np.ndarray, k: int, seed: int,
                     n_init: int = 10, max_iter: int = 300) -> np.ndarray:
    """k-means on the spectral embedding; returns the label vector."""
    from .kmeans import kmeans

    emb = embed(affinity, k)
    result = kmeans(emb.coords, k, seed=seed, n_init=n_init, max_iter=max_iter)
    return result.labels
