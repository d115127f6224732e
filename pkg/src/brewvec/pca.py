"""PCA over raw count rows and the 2D projection of the flavor matrix.

The eigendecomposition is a cyclic Jacobi sweep over the sample covariance:
rotate away the largest off-diagonal entries pair by pair until the matrix
is numerically diagonal.  Unconditionally convergent for symmetric input,
which keeps the zero-variance degenerate case well defined.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, ValidationError
from .ingest import CountMatrix
from .model import EmbeddingModel

BASELINE_COMPONENTS = 5


@dataclass
class PcaModel:
    """Column means, orthonormal component rows, matching variances."""

    means: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """All eigenpairs of a symmetric matrix via cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvectors in columns,
    unsorted.  Stops once the off-diagonal Frobenius mass falls below
    tol times the total Frobenius norm.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValidationError("jacobi_eigh requires a square matrix")
    v = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), v

    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.square(a)) - np.sum(np.square(np.diag(a))))
        if off <= tol * fro:
            break
        skip = off * 1e-12 / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    return np.diag(a).copy(), v


def fit_pca(data: np.ndarray, c: int) -> PcaModel:
    """Top-c principal components of the rows of data.

    Columns are mean-centered; the covariance uses divisor n-1; component
    signs are fixed so each row's largest-magnitude entry is positive.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError("fit_pca requires a 2D matrix")
    n, d = x.shape
    if n < 2:
        raise DataError(f"fit_pca requires at least 2 samples, got {n}")
    if not 1 <= c <= min(n - 1, d):
        raise DataError(f"component count {c} out of range [1, {min(n - 1, d)}]")

    means = x.mean(axis=0)
    centered = x - means
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = jacobi_eigh(cov)

    order = np.argsort(-eigvals, kind="stable")[:c]
    components = eigvecs[:, order].T.copy()
    explained = eigvals[order].copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaModel(means, components, explained)


def transform(model: PcaModel, data: np.ndarray) -> np.ndarray:
    """Project rows of data onto the fitted components."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.means.shape[0]:
        raise ValidationError(
            f"transform expects {model.means.shape[0]} columns, "
            f"got shape {x.shape}"
        )
    return (x - model.means) @ model.components.T


def pca_beer_vectors(counts: CountMatrix, c: int = BASELINE_COMPONENTS) -> np.ndarray:
    """Baseline beer vectors: PCA scores of the raw count rows."""
    if counts.counts.shape[0] < c + 1:
        raise DataError(
            f"need at least {c + 1} beers for a {c}-component baseline, "
            f"got {counts.counts.shape[0]}"
        )
    model = fit_pca(counts.counts, c)
    return transform(model, counts.counts)


def project_flavors_2d(model: EmbeddingModel) -> np.ndarray:
    """Two-dimensional map of the flavor matrix for plotting."""
    if model.k < 2:
        raise DataError("2D projection requires embedding dimension >= 2")
    pca = fit_pca(model.flavor_matrix, 2)
    return transform(pca, model.flavor_matrix)
