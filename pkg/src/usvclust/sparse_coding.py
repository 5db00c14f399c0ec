"""Sparse self-expression: LASSO coordinate descent and orthogonal matching
pursuit, plus the N x N coefficient matrix built from either.

Each sample is coded against the dictionary of all *other* samples, so the
coefficient matrix has a structurally zero diagonal.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError

DENOISE_EPS = 0.001


@dataclass
class SparseCodingConfig:
    """Knobs for building the coefficient matrix.

    method : 'lasso' or 'omp'
    lam : L1 weight for the LASSO route
    sparsity_k : atom budget for the OMP route
    max_iter, tol : coordinate-descent sweep limit and convergence threshold
    denoise_eps : entries with magnitude strictly below this are zeroed
    """

    method: str = "lasso"
    lam: float = 0.3
    sparsity_k: int = 10
    max_iter: int = 1000
    tol: float = 1e-7
    denoise_eps: float = DENOISE_EPS

    def __post_init__(self):
        if self.method not in ("lasso", "omp"):
            raise ParameterError(f"unknown sparse coding method {self.method!r}")
        if self.lam <= 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if self.sparsity_k < 1:
            raise ParameterError(f"sparsity budget must be >= 1, got {self.sparsity_k}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol <= 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.denoise_eps < 0:
            raise ParameterError(f"denoise_eps must be >= 0, got {self.denoise_eps}")


@dataclass(frozen=True)
class CoefficientMatrix:
    """Self-expression coefficients (column j codes sample j)."""

    y: np.ndarray
    method: str
    lam: float | None
    denoise_eps: float
    n_nonconverged: int = 0

    @property
    def n(self) -> int:
        return self.y.shape[0]


def soft_threshold(z: float, lam: float) -> float:
    """Proximal map of lam * |.|: shrink z toward zero by lam."""
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


def _cd_gram(gram: np.ndarray, corr: np.ndarray, lam: float,
             max_iter: int, tol: float):
    """Cyclic coordinate descent on the Gram form of the LASSO.

    Minimizes 0.5*||t - A y||^2 + lam*||y||_1 given gram = A^T A and
    corr = A^T t; the data matrix itself is never touched. Returns
    (y, converged).
    """
    n = gram.shape[0]
    y = np.zeros(n)
    norms_sq = np.diag(gram).copy()
    c = corr.copy()  # c = corr - gram @ y, the negative smooth gradient
    for _ in range(max_iter):
        c = corr - gram @ y  # refresh once per sweep to cancel drift
        max_delta = 0.0
        for j in range(n):
            nsq = norms_sq[j]
            if nsq <= 0.0:
                continue
            z = c[j] + nsq * y[j]
            new = soft_threshold(z, lam) / nsq
            delta = new - y[j]
            if delta != 0.0:
                y[j] = new
                c -= delta * gram[:, j]
                max_delta = max(max_delta, abs(delta))
        if max_delta < tol:
            return y, True
    return y, False


def lasso_column(dictionary: np.ndarray, target: np.ndarray, lam: float,
                 max_iter: int = 1000, tol: float = 1e-7):
    """Solve min_y 0.5*||target - dictionary @ y||^2 + lam*||y||_1.

    Parameters
    ----------
    dictionary : (d, n) array
    target : (d,) array
    lam : positive L1 weight
    max_iter : maximum number of full coordinate sweeps
    tol : maximum coefficient change per sweep below which we stop

    Returns
    -------
    (y, converged) : coefficient vector and whether tol was reached.
    """
    a = np.asarray(dictionary, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if a.ndim != 2 or t.ndim != 1 or a.shape[0] != t.shape[0]:
        raise ValidationError("dictionary and target shapes do not match")
    if lam <= 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    return _cd_gram(a.T @ a, a.T @ t, lam, max_iter, tol)


def lasso_objective(dictionary: np.ndarray, target: np.ndarray,
                    y: np.ndarray, lam: float) -> float:
    """Value of the LASSO objective at y."""
    r = target - dictionary @ y
    return 0.5 * float(r @ r) + lam * float(np.abs(y).sum())


def kkt_violation(dictionary: np.ndarray, target: np.ndarray,
                  y: np.ndarray, lam: float) -> float:
    """Worst first-order optimality violation of y for the LASSO.

    Zero (up to rounding) iff y is a minimizer: the gradient of the smooth
    part must equal -lam*sign(y_j) on the support and lie in [-lam, lam]
    elsewhere.
    """
    grad = dictionary.T @ (dictionary @ y - target)
    viol = 0.0
    for j in range(len(y)):
        if y[j] != 0.0:
            viol = max(viol, abs(grad[j] + lam * np.sign(y[j])))
        else:
            viol = max(viol, max(abs(grad[j]) - lam, 0.0))
    return viol


def lambda_max(dictionary: np.ndarray, target: np.ndarray) -> float:
    """Smallest lam for which the all-zero vector is already optimal."""
    return float(np.max(np.abs(np.asarray(dictionary).T @ np.asarray(target))))


def omp_column(dictionary: np.ndarray, target: np.ndarray, sparsity_k: int,
               tol: float = 1e-7) -> np.ndarray:
    """Orthogonal matching pursuit with at most ``sparsity_k`` atoms.

    Atoms are picked by largest absolute correlation with the residual and
    the active coefficients are re-fit by least squares each round. If the
    active set goes rank deficient the newest atom is dropped and the
    previous solution is returned.
    """
    a = np.asarray(dictionary, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if a.ndim != 2 or t.ndim != 1 or a.shape[0] != t.shape[0]:
        raise ValidationError("dictionary and target shapes do not match")
    n_atoms = a.shape[1]
    if not 1 <= sparsity_k <= n_atoms:
        raise ParameterError(
            f"sparsity budget {sparsity_k} out of range for {n_atoms} atoms"
        )
    y = np.zeros(n_atoms)
    active: list[int] = []
    coef = np.zeros(0)
    residual = t.copy()
    for _ in range(sparsity_k):
        corr = a.T @ residual
        corr[active] = 0.0
        j = int(np.argmax(np.abs(corr)))
        if corr[j] == 0.0:
            break
        active.append(j)
        sub = a[:, active]
        sol, _, rank, _ = np.linalg.lstsq(sub, t, rcond=None)
        if rank < len(active):
            active.pop()
            break
        coef = sol
        residual = t - sub @ coef
        if np.linalg.norm(residual) < tol:
            break
    y[active] = coef
    return y


def denoise(coeffs: CoefficientMatrix, eps: float | None = None) -> CoefficientMatrix:
    """Zero every entry with magnitude strictly below eps.

    Entries exactly at eps survive. eps defaults to the matrix's own
    denoise_eps.
    """
    if eps is None:
        eps = coeffs.denoise_eps
    if eps < 0:
        raise ParameterError(f"denoise eps must be >= 0, got {eps}")
    y = coeffs.y.copy()
    y[np.abs(y) < eps] = 0.0
    return CoefficientMatrix(
        y=y, method=coeffs.method, lam=coeffs.lam, denoise_eps=eps,
        n_nonconverged=coeffs.n_nonconverged,
    )


def self_express(data: np.ndarray, config: SparseCodingConfig) -> CoefficientMatrix:
    """Code every column of ``data`` against all the others.

    Parameters
    ----------
    data : (d, n) array
        Feature columns (unit norm in the pipeline, not enforced here).
    config : SparseCodingConfig

    Returns
    -------
    CoefficientMatrix with a zero diagonal; entries below
    ``config.denoise_eps`` in magnitude are zeroed.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError("data must be 2-D")
    n = x.shape[1]
    if n < 2:
        raise ValidationError("need at least 2 samples for self-expression")
    if config.method == "omp" and config.sparsity_k >= n:
        raise ParameterError(
            f"sparsity budget {config.sparsity_k} must be below the sample "
            f"count {n} (each dictionary has {n - 1} atoms)"
        )
    y = np.zeros((n, n))
    n_nonconverged = 0
    if config.method == "lasso":
        gram = x.T @ x
        for j in range(n):
            keep = np.concatenate([np.arange(j), np.arange(j + 1, n)])
            col, ok = _cd_gram(
                gram[np.ix_(keep, keep)], gram[keep, j],
                config.lam, config.max_iter, config.tol,
            )
            if not ok:
                n_nonconverged += 1
            y[keep, j] = col
        if n_nonconverged:
            warnings.warn(
                f"{n_nonconverged} of {n} columns hit the sweep limit "
                f"({config.max_iter}) before reaching tol={config.tol}",
                RuntimeWarning,
            )
    else:
        for j in range(n):
            keep = np.concatenate([np.arange(j), np.arange(j + 1, n)])
            y[keep, j] = omp_column(x[:, keep], x[:, j], config.sparsity_k,
                                    tol=config.tol)
    lam = config.lam if config.method == "lasso" else None
    raw = CoefficientMatrix(
        y=y, method=config.method, lam=lam,
        denoise_eps=config.denoise_eps, n_nonconverged=n_nonconverged,
    )
    return denoise(raw)
