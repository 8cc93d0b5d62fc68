from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from quiverflow.logger import get_logger
from quiverflow.quiver_core import INFINITY, FramedQuiver, Quiver, jordan_quiver, star
from quiverflow.utils.linalg import op_norm

logger = get_logger(__name__)


class RepShapeError(ValueError):
    pass


class SingularGaugeError(ValueError):
    pass


@dataclass(frozen=True)
class RepPoint:
    """A representation of the double quiver: one matrix per edge a: i -> j.

    mats[a] has shape (dims[j], dims[i]).
    """

    quiver: Quiver
    dims: tuple[int, ...]
    mats: Mapping[str, np.ndarray] = field(repr=False)

    def __post_init__(self):
        if not self.quiver.is_double:
            error_msg = "A representation point lives on a double quiver."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        dims = tuple(int(d) for d in self.quiver.vector(self.dims))
        object.__setattr__(self, "dims", dims)
        mats = {}
        for edge in self.quiver.edges:
            shape = (self.dim(edge.head), self.dim(edge.tail))
            if edge.id not in self.mats:
                error_msg = f"Missing matrix for edge {edge.id}."
                logger.error(error_msg)
                raise RepShapeError(error_msg)
            matrix = np.asarray(self.mats[edge.id], dtype=complex)
            if matrix.shape != shape:
                error_msg = f"Edge {edge.id} carries {matrix.shape}, expected {shape}."
                logger.error(error_msg)
                raise RepShapeError(error_msg)
            mats[edge.id] = matrix
        extra = set(self.mats) - set(mats)
        if extra:
            error_msg = f"Matrices given for unknown edges {sorted(extra)}."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        object.__setattr__(self, "mats", mats)

    def dim(self, vertex: str) -> int:
        return self.dims[self.quiver.index(vertex)]

    def mat(self, edge_id: str) -> np.ndarray:
        return self.mats[edge_id]

    def with_mats(self, updates: Mapping[str, np.ndarray]) -> "RepPoint":
        return RepPoint(self.quiver, self.dims, {**self.mats, **updates})

    def with_dims(
        self, dims: Sequence[int], updates: Mapping[str, np.ndarray]
    ) -> "RepPoint":
        """Same quiver, new dims; every edge not in updates keeps its matrix."""
        return RepPoint(
            self.quiver, tuple(int(d) for d in dims), {**self.mats, **updates}
        )

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> dict[str, slice]:
        """Block of each V_i inside the direct sum of all V_i."""
        offsets, start = {}, 0
        for vertex, d in zip(self.quiver.vertices, self.dims, strict=True):
            offsets[vertex] = slice(start, start + d)
            start += d
        return offsets

    def block_matrix(self, edge_id: str) -> np.ndarray:
        """V_a embedded in End of the direct sum."""
        edge = self.quiver.edge(edge_id)
        big = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        big[self.offsets[edge.head], self.offsets[edge.tail]] = self.mats[edge_id]
        return big

    def scale(self) -> float:
        return max((op_norm(m) for m in self.mats.values()), default=0.0)


def zero_point(quiver: Quiver, dims: Sequence[int]) -> RepPoint:
    quiver = quiver.double()
    dims = quiver.vector(dims)
    index = {v: d for v, d in zip(quiver.vertices, dims, strict=True)}
    mats = {
        e.id: np.zeros((index[e.head], index[e.tail]), dtype=complex)
        for e in quiver.edges
    }
    return RepPoint(quiver, tuple(dims), mats)


@dataclass(frozen=True)
class GaugeElement:
    """One invertible g_i per vertex."""

    mats: Mapping[str, np.ndarray]

    def condition_numbers(self) -> dict[str, float]:
        return {
            v: float(np.linalg.cond(g)) if g.size else 1.0 for v, g in self.mats.items()
        }

    def inverse(self, vertex: str) -> np.ndarray:
        g = self.mats[vertex]
        if g.size == 0:
            return g
        try:
            return np.linalg.inv(g)
        except np.linalg.LinAlgError as e:
            error_msg = f"Gauge component at vertex {vertex} is singular."
            logger.error(error_msg)
            raise SingularGaugeError(error_msg) from e


def random_gauge(point: RepPoint, rng: np.random.Generator) -> GaugeElement:
    """Well-conditioned random gauge element, identity at inf."""
    mats = {}
    for vertex, d in zip(point.quiver.vertices, point.dims, strict=True):
        if vertex == INFINITY:
            mats[vertex] = np.eye(d, dtype=complex)
            continue
        noise = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        mats[vertex] = np.eye(d) + 0.3 * noise / max(1.0, np.sqrt(d))
    return GaugeElement(mats)


def gauge_act(g: GaugeElement, point: RepPoint) -> RepPoint:
    """V_a -> g_j V_a g_i^{-1} for a: i -> j."""
    mats = {}
    for edge in point.quiver.edges:
        g_head = g.mats.get(edge.head)
        g_tail = g.mats.get(edge.tail)
        if g_head is None or g_tail is None:
            error_msg = f"Gauge element misses a component for edge {edge.id}."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        mats[edge.id] = g_head @ point.mat(edge.id) @ g.inverse(edge.tail)
    return RepPoint(point.quiver, point.dims, mats)


def moment_map(point: RepPoint) -> dict[str, np.ndarray]:
    """P_i(V) = sum over a: j -> i of (-1)^a V_a V_{a*}."""
    quiver = point.quiver
    result = {}
    for vertex in quiver.vertices:
        d = point.dim(vertex)
        total = np.zeros((d, d), dtype=complex)
        for edge in quiver.incoming(vertex):
            product = point.mat(edge.id) @ point.mat(star(edge.id))
            total += quiver.sign(edge.id) * product
        result[vertex] = total
    return result


def relation_residual(point: RepPoint, lam: Sequence[complex]) -> float:
    """max_i || P_i(V) - lambda_i Id ||."""
    lam = point.quiver.vector(lam, dtype=complex)
    residual = 0.0
    for (vertex, p_i), lam_i in zip(moment_map(point).items(), lam, strict=True):
        residual = max(residual, op_norm(p_i - lam_i * np.eye(point.dim(vertex))))
    return residual


def moment_hamiltonian(point: RepPoint, theta: Mapping[str, np.ndarray]) -> complex:
    """H_theta(V) = sum_i tr(P_i(V) theta_i)."""
    return complex(
        sum(
            np.trace(p_i @ theta[vertex])
            for vertex, p_i in moment_map(point).items()
            if p_i.size
        )
    )


def framed_jordan_point(
    X: np.ndarray, Y: np.ndarray, v: np.ndarray, w: np.ndarray
) -> RepPoint:
    """Point of the framed Jordan quiver: v is n x d, w is d x n."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    Y = np.atleast_2d(np.asarray(Y, dtype=complex))
    n = X.shape[0]
    v = np.asarray(v, dtype=complex).reshape(n, -1)
    d = v.shape[1]
    w = np.asarray(w, dtype=complex).reshape(d, n)
    framed = FramedQuiver(jordan_quiver(), (d,))
    quiver = framed.quiver.double()
    mats = {"x0": X, "x0*": Y}
    for r in range(1, d + 1):
        b = framed.framing_edge_id("0", r)
        mats[b] = v[:, r - 1 : r]
        mats[star(b)] = w[r - 1 : r, :]
    return RepPoint(quiver, (1, n), mats)


def collision_point(kind: str, x1: complex, a: complex, b: complex) -> RepPoint:
    """The two-particle collision points where X has a 2x2 Jordan block."""
    X = np.array([[x1, 1], [0, x1]], dtype=complex)
    if kind == "coll2a":
        Y = np.array([[a, b], [1, a]], dtype=complex)
        v = np.array([[0], [2]], dtype=complex)
        w = np.array([[0, 1]], dtype=complex)
    elif kind == "coll2b":
        Y = np.array([[a, b], [-1, a]], dtype=complex)
        v = np.array([[1], [0]], dtype=complex)
        w = np.array([[2, 0]], dtype=complex)
    else:
        error_msg = f"Unknown collision point {kind!r}, expected coll2a or coll2b."
        logger.error(error_msg)
        raise ValueError(error_msg)
    return framed_jordan_point(X, Y, v, w)
