from collections.abc import Sequence

import numpy as np

from quiverflow.config import get_config
from quiverflow.logger import get_logger
from quiverflow.rep_variety._point import RepPoint, moment_map, relation_residual

logger = get_logger(__name__)

ON_SHELL_TOL = 1e-8


class OffShellPointError(ValueError):
    pass


def _generators(point: RepPoint) -> list[np.ndarray]:
    generators = []
    for vertex in point.quiver.vertices:
        projection = np.zeros((point.total_dim, point.total_dim), dtype=complex)
        block = point.offsets[vertex]
        projection[block, block] = np.eye(point.dim(vertex))
        generators.append(projection)
    generators.extend(point.block_matrix(e.id) for e in point.quiver.edges)
    return generators


def generated_algebra_dimension(point: RepPoint, tol: float | None = None) -> int:
    """Dimension of the span of all words in vertex projections and the V_a."""
    tol = get_config().tolerances.simple_rank if tol is None else tol
    generators = _generators(point)
    basis = np.zeros((0, point.total_dim**2), dtype=complex)
    frontier = []

    def absorb(matrix: np.ndarray) -> bool:
        nonlocal basis
        vector = matrix.reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            return False
        vector = vector / norm
        if basis.shape[0]:
            vector = vector - basis.T @ (basis.conj() @ vector)
            # second pass against cancellation
            vector = vector - basis.T @ (basis.conj() @ vector)
        residual = np.linalg.norm(vector)
        if residual <= tol:
            return False
        basis = np.vstack([basis, vector / residual])
        return True

    for g in generators:
        if absorb(g):
            frontier.append(g)
    while frontier and basis.shape[0] < point.total_dim**2:
        element = frontier.pop()
        for g in generators:
            product = g @ element
            if absorb(product):
                frontier.append(product)
    return basis.shape[0]


def is_simple(
    point: RepPoint, tol: float | None = None, lam: Sequence[complex] | None = None
) -> bool:
    """Jacobson density: simple iff the generated algebra is all of End(sum V_i).

    The point must satisfy the relations P_i(V) = lambda_i Id; without lam the
    lambda_i are read off tr(P_i) / alpha_i.
    """
    if lam is None:
        lam = [
            complex(np.trace(p_i)) / p_i.shape[0] if p_i.size else 0j
            for p_i in moment_map(point).values()
        ]
    residual = relation_residual(point, lam)
    if residual > ON_SHELL_TOL * max(1.0, point.scale()) ** 2:
        error_msg = f"Point is off-shell: relation residual {residual:.3e}."
        logger.error(error_msg)
        raise OffShellPointError(error_msg)
    if point.total_dim == 0:
        return False
    dimension = generated_algebra_dimension(point, tol)
    logger.debug(f"{dimension=} of {point.total_dim**2} for dims {point.dims}")
    return dimension == point.total_dim**2
