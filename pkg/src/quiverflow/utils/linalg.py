"""Small numerical helpers shared across subpackages."""

import numpy as np
import scipy.linalg


def op_norm(matrix: np.ndarray) -> float:
    """Operator 2-norm, zero for empty matrices."""
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, ord=2))


def numeric_rank(matrix: np.ndarray, cutoff: float) -> tuple[int, np.ndarray]:
    """Rank with singular values below cutoff * sigma_max discarded.

    Returns the rank and the singular values.
    """
    if matrix.size == 0:
        return 0, np.zeros(0)
    sigma = scipy.linalg.svdvals(matrix)
    if sigma[0] == 0:
        return 0, sigma
    return int(np.sum(sigma > cutoff * sigma[0])), sigma


def range_basis(matrix: np.ndarray, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the column space and the singular values."""
    n_rows = matrix.shape[0]
    if matrix.size == 0:
        return np.zeros((n_rows, 0), dtype=complex), np.zeros(0)
    u, sigma, _ = scipy.linalg.svd(matrix)
    rank = int(np.sum(sigma > cutoff * sigma[0])) if sigma[0] > 0 else 0
    return u[:, :rank], sigma


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def matrix_power_product(mats: list[np.ndarray], size: int) -> np.ndarray:
    """Product mats[-1] @ ... @ mats[0], the identity of given size if empty."""
    result = np.eye(size, dtype=complex)
    for mat in mats:
        result = mat @ result
    return result
