"""Matrix-level reflection functor at a loop-free vertex k.

With H the edges a: j -> k of the double quiver, V_plus is the direct sum of
the V_{t(a)} over H and

    mu = (V_{a*})_a : V_k -> V_plus,
    pi = (1 / lambda_k) ((-1)^a V_a)_a : V_plus -> V_k,

so that pi mu = 1 on a point of Rep(Pi^lambda). The new space V'_k is
Ker pi, the image of the projector 1 - mu pi, and

    V'_a = -lambda_k (-1)^a pi' mu_a,    V'_{a*} = pi_a mu',

where mu' embeds Ker pi and pi' = mu'^+ (1 - mu pi).
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from quiverflow.config import get_config
from quiverflow.logger import get_logger
from quiverflow.quiver_core import (
    Edge,
    FramedQuiver,
    LoopVertexError,
    reflect_dim,
    reflect_weight,
    star,
)
from quiverflow.reflection_functor._transport import transport_report
from quiverflow.rep_variety import RepPoint, relation_residual
from quiverflow.utils.linalg import range_basis

logger = get_logger(__name__)

ADMISSIBLE_ATOL = 1e-12

KernelMode = Literal["svd", "pivot"]


class InadmissibleReflectionError(ValueError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class KernelExtractionError(ValueError):
    def __init__(self, message: str, rank: int, expected: int, sigma_min: float):
        super().__init__(message)
        self.rank = rank
        self.expected = expected
        self.sigma_min = sigma_min


class OffShellError(ValueError):
    pass


@dataclass(frozen=True)
class ReflectionResult:
    """Output of one reflection, with the maps used to build it."""

    point: RepPoint
    weight: np.ndarray
    vertex: str
    edges: tuple[Edge, ...]
    kernel_basis: np.ndarray = field(repr=False)
    conditioning: float
    mu: np.ndarray = field(repr=False)
    pi: np.ndarray = field(repr=False)
    pi_prime: np.ndarray = field(repr=False)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.point.dims


def admissible(point_or_quiver, lam: Sequence[complex], k: str) -> bool:
    """k is loop-free and |lambda_k| > 0."""
    quiver = getattr(point_or_quiver, "quiver", point_or_quiver)
    if quiver.has_loop(k):
        return False
    lam = quiver.vector(lam, dtype=complex)
    return bool(abs(lam[quiver.index(k)]) > ADMISSIBLE_ATOL)


def _blocks(point: RepPoint, edges: tuple[Edge, ...]) -> list[slice]:
    blocks, start = [], 0
    for edge in edges:
        d = point.dim(edge.tail)
        blocks.append(slice(start, start + d))
        start += d
    return blocks


def _kernel_basis(
    projector: np.ndarray, expected: int, mode: KernelMode, cutoff: float
) -> tuple[np.ndarray, float]:
    """Basis of the image of 1 - mu pi and the smallest retained singular value."""
    size = projector.shape[0]
    if expected == 0:
        return np.zeros((size, 0), dtype=complex), np.inf
    basis, sigma = range_basis(projector, cutoff)
    rank = basis.shape[1]
    sigma_min = float(sigma[rank - 1]) if rank else 0.0
    if rank != expected:
        error_msg = (
            f"Kernel of pi has numerical rank {rank}, expected {expected} "
            f"(smallest retained singular value {sigma_min:.3e})."
        )
        logger.error(error_msg)
        raise KernelExtractionError(error_msg, rank, expected, sigma_min)
    if mode == "svd":
        return basis, sigma_min
    _, _, pivots = scipy.linalg.qr(projector, pivoting=True)
    columns = projector[:, np.sort(pivots[:expected])]
    return columns, float(scipy.linalg.svdvals(columns)[-1])


def apply_reflection(
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    mode: KernelMode = "svd",
) -> ReflectionResult:
    """Reflect a point of Rep(Pi^lambda, alpha) at vertex k.

    The output lives over the same quiver with dims s_k(alpha) and satisfies
    the relations of Pi^{r_k lambda}.
    """
    quiver = point.quiver
    config = get_config()
    lam = quiver.vector(lam, dtype=complex)
    if quiver.has_loop(k):
        error_msg = f"Vertex {k} carries a loop and cannot be reflected."
        logger.error(error_msg)
        raise LoopVertexError(error_msg)
    if not admissible(quiver, lam, k):
        error_msg = f"Reflection at {k} is not admissible: lambda_{k} = 0."
        logger.error(error_msg)
        raise InadmissibleReflectionError(error_msg)

    scale = max(1.0, point.scale()) ** 2
    residual = relation_residual(point, lam)
    if residual > 1e-8 * scale:
        error_msg = f"Point is off the level set lambda: residual {residual:.3e}."
        logger.error(error_msg)
        raise OffShellError(error_msg)

    lam_k = lam[quiver.index(k)]
    edges = quiver.incoming(k)
    blocks = _blocks(point, edges)
    total = sum(point.dim(e.tail) for e in edges)
    alpha_k = point.dim(k)

    mu = np.zeros((total, alpha_k), dtype=complex)
    pi = np.zeros((alpha_k, total), dtype=complex)
    for edge, block in zip(edges, blocks, strict=True):
        mu[block, :] = point.mat(star(edge.id))
        pi[:, block] = quiver.sign(edge.id) * point.mat(edge.id) / lam_k

    projector = np.eye(total, dtype=complex) - mu @ pi
    new_dims = reflect_dim(quiver, k, point.dims)
    expected = int(new_dims[quiver.index(k)])
    mu_prime, conditioning = _kernel_basis(
        projector, expected, mode, config.tolerances.kernel_cutoff
    )
    if mode == "svd":
        pi_prime = mu_prime.conj().T @ projector
    else:
        pi_prime = np.linalg.pinv(mu_prime) @ projector

    updates = {}
    for edge, block in zip(edges, blocks, strict=True):
        updates[edge.id] = -lam_k * quiver.sign(edge.id) * pi_prime[:, block]
        updates[star(edge.id)] = mu_prime[block, :]

    new_point = point.with_dims(new_dims, updates)
    new_weight = reflect_weight(quiver, k, lam)
    logger.info(f"Reflected at {k}: dims {point.dims} -> {new_point.dims}.")
    logger.debug(f"{conditioning=}")
    return ReflectionResult(
        point=new_point,
        weight=new_weight,
        vertex=k,
        edges=edges,
        kernel_basis=mu_prime,
        conditioning=conditioning,
        mu=mu,
        pi=pi,
        pi_prime=pi_prime,
    )


@dataclass(frozen=True)
class ChainResult:
    point: RepPoint
    weight: np.ndarray
    steps: tuple[ReflectionResult, ...] = ()
    transport: tuple[dict[str, complex], ...] = ()


def chain_apply(
    point: RepPoint,
    chain: Sequence[str],
    lam: Sequence[complex],
    mode: KernelMode = "svd",
    framed: FramedQuiver | None = None,
) -> ChainResult:
    """Fold apply_reflection along chain (applied left to right).

    With a framing given, each step also records the Hamiltonian transport
    constants, see transport_constants.
    """
    lam = point.quiver.vector(lam, dtype=complex)
    steps, transport = [], []
    current = point
    for step, k in enumerate(chain):
        if not admissible(current.quiver, lam, k):
            error_msg = f"Chain step {step}: reflection at {k} is not admissible."
            logger.error(error_msg)
            raise InadmissibleReflectionError(error_msg, step=step)
        if framed is not None:
            transport.append(transport_report(framed, current, k, lam))
        result = apply_reflection(current, k, lam, mode=mode)
        steps.append(result)
        current, lam = result.point, result.weight
    return ChainResult(current, lam, tuple(steps), tuple(transport))
