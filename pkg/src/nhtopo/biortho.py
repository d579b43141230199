"""Biorthogonal eigendecomposition of non-normal matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectiveError


@dataclass(frozen=True)
class BiorthogonalDecomposition:
    """Eigenvalues with paired right/left eigenvectors, <L_m|R_n> = delta_mn.

    ``right`` holds unit-norm right eigenvectors as columns; ``left`` holds
    the matching left eigenvectors as columns, normalized through
    left^dagger right = identity (so left = inv(right)^dagger).
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self, values=None) -> np.ndarray:
        """Sum of values[m] |R_m><L_m| (defaults to the eigenvalues)."""
        if values is None:
            values = self.eigenvalues
        return (self.right * np.asarray(values)) @ self.left.conj().T


def biorthogonal_eig(
    h: np.ndarray, degeneracy_tol: float = 1e-8
) -> BiorthogonalDecomposition:
    """Diagonalize ``h`` with biorthonormal left/right eigenvector pairs.

    Eigenpairs are sorted by (real, imag) eigenvalue for reproducibility.

    Parameters
    ----------
    h : np.ndarray
        Square complex matrix.
    degeneracy_tol : float
        The decomposition is rejected as defective when the right
        eigenvector matrix has condition number above 1/degeneracy_tol
        (exceptional point).

    Raises
    ------
    DefectiveError
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    values, right = np.linalg.eig(h)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    right = right[:, order]
    cond = float(np.linalg.cond(right))
    if not np.isfinite(cond) or cond > 1.0 / degeneracy_tol:
        raise DefectiveError(
            f"eigenvector condition number {cond:.3e} exceeds 1/{degeneracy_tol:g}"
        )
    left = np.linalg.inv(right).conj().T
    return BiorthogonalDecomposition(
        eigenvalues=values, right=right, left=left, condition=cond
    )


def cluster_eigenvalues(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group sorted eigenvalue indices into clusters of spacing <= tol."""
    n = values.size
    clusters: list[np.ndarray] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or abs(values[i] - values[i - 1]) > tol:
            clusters.append(np.arange(start, i))
            start = i
    return clusters
