from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from quiverflow.logger import get_logger

logger = get_logger(__name__)

INFINITY = "inf"
STAR = "*"


class QuiverError(ValueError):
    pass


class DimensionMismatchError(QuiverError):
    pass


class LoopVertexError(QuiverError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Quiver:
    """A finite quiver, optionally carrying the star pairing of a double.

    Edge ids ending in "*" are the reversed partners a* of the base edges.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    is_double: bool = False
    _index: dict[str, int] = field(init=False, repr=False, compare=False)
    _edges: dict[str, Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            error_msg = f"Duplicate vertices in {self.vertices}."
            logger.error(error_msg)
            raise QuiverError(error_msg)
        index = {v: i for i, v in enumerate(self.vertices)}
        edges = {}
        for edge in self.edges:
            if edge.tail not in index or edge.head not in index:
                error_msg = f"Edge {edge.id} joins unknown vertices."
                logger.error(error_msg)
                raise QuiverError(error_msg)
            if edge.id in edges:
                error_msg = f"Duplicate edge id {edge.id}."
                logger.error(error_msg)
                raise QuiverError(error_msg)
            edges[edge.id] = edge
        if self.is_double:
            for edge in self.edges:
                partner = edges.get(star(edge.id))
                if partner is None or (partner.tail, partner.head) != (
                    edge.head,
                    edge.tail,
                ):
                    error_msg = f"Edge {edge.id} has no reversed partner."
                    logger.error(error_msg)
                    raise QuiverError(error_msg)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_edges", edges)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        try:
            return self._index[vertex]
        except KeyError as e:
            error_msg = f"Unknown vertex {vertex!r}, expected one of {self.vertices}."
            logger.error(error_msg)
            raise QuiverError(error_msg) from e

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError as e:
            error_msg = f"Unknown edge {edge_id!r}."
            logger.error(error_msg)
            raise QuiverError(error_msg) from e

    @property
    def base_edges(self) -> tuple[Edge, ...]:
        """Edges of Q, i.e. the unstarred edges of a double."""
        return tuple(e for e in self.edges if not is_starred(e.id))

    def sign(self, edge_id: str) -> int:
        """(-1)^a: +1 on Q, -1 on Q*."""
        return -1 if is_starred(edge_id) else 1

    def double(self) -> "Quiver":
        """The double quiver with a* added for every edge a."""
        if self.is_double:
            return self
        starred = tuple(Edge(star(e.id), e.head, e.tail) for e in self.edges)
        return Quiver(self.vertices, self.edges + starred, is_double=True)

    def base(self) -> "Quiver":
        if not self.is_double:
            return self
        return Quiver(self.vertices, self.base_edges)

    @cached_property
    def arrow_matrix(self) -> np.ndarray:
        """Number of edges i -> j in Q."""
        counts = np.zeros((self.size, self.size), dtype=int)
        for e in self.base_edges:
            counts[self._index[e.tail], self._index[e.head]] += 1
        return counts

    @cached_property
    def cartan(self) -> np.ndarray:
        """Gram matrix (eps_i, eps_j) = 2 delta_ij - n_ij."""
        return 2 * np.eye(self.size, dtype=int) - (
            self.arrow_matrix + self.arrow_matrix.T
        )

    def has_loop(self, vertex: str) -> bool:
        return any(e.is_loop and e.tail == vertex for e in self.base_edges)

    @property
    def loop_free(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.has_loop(v))

    def incoming(self, vertex: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.head == vertex)

    def outgoing(self, vertex: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.tail == vertex)

    def support_graph(self, support: Iterable[str]) -> nx.MultiGraph:
        support = set(support)
        graph = nx.MultiGraph()
        graph.add_nodes_from(support)
        graph.add_edges_from(
            (e.tail, e.head)
            for e in self.base_edges
            if e.tail in support and e.head in support
        )
        return graph

    def digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.tail, e.head, key=e.id)
        return graph

    def vector(self, values: Sequence, dtype=int) -> np.ndarray:
        """Validate a per-vertex vector against the vertex count."""
        array = np.asarray(values, dtype=dtype)
        if array.shape != (self.size,):
            error_msg = (
                f"Vector of length {array.shape} does not match "
                f"the {self.size} vertices {self.vertices}."
            )
            logger.error(error_msg)
            raise DimensionMismatchError(error_msg)
        return array


def star(edge_id: str) -> str:
    """The partner id: a -> a*, a* -> a."""
    if is_starred(edge_id):
        return edge_id[: -len(STAR)]
    return f"{edge_id}{STAR}"


def is_starred(edge_id: str) -> bool:
    return edge_id.endswith(STAR)


@dataclass(frozen=True)
class FramedQuiver:
    """Base quiver Q with a vertex inf and zeta_i edges b_{i,r}: inf -> i."""

    base: Quiver
    zeta: tuple[int, ...]

    def __post_init__(self):
        if len(self.zeta) != self.base.size or any(z < 0 for z in self.zeta):
            error_msg = f"Invalid framing {self.zeta} for {self.base.vertices}."
            logger.error(error_msg)
            raise DimensionMismatchError(error_msg)
        if INFINITY in self.base.vertices:
            error_msg = f"Vertex name {INFINITY!r} is reserved for the framing vertex."
            logger.error(error_msg)
            raise QuiverError(error_msg)

    @classmethod
    def from_zeta(cls, base: Quiver, zeta: dict[str, int] | Sequence[int]):
        if isinstance(zeta, dict):
            unknown = set(zeta) - set(base.vertices)
            if unknown:
                error_msg = f"Framing names unknown vertices {sorted(unknown)}."
                logger.error(error_msg)
                raise QuiverError(error_msg)
            zeta = [int(zeta.get(v, 0)) for v in base.vertices]
        return cls(base.base(), tuple(int(z) for z in zeta))

    @staticmethod
    def framing_edge_id(vertex: str, r: int) -> str:
        return f"b{vertex}_{r}"

    @cached_property
    def framing_edges(self) -> tuple[Edge, ...]:
        return tuple(
            Edge(self.framing_edge_id(v, r), INFINITY, v)
            for v, z in zip(self.base.vertices, self.zeta, strict=True)
            for r in range(1, z + 1)
        )

    @cached_property
    def quiver(self) -> Quiver:
        """The framed quiver Q_zeta with inf as vertex 0."""
        return Quiver(
            (INFINITY, *self.base.vertices),
            self.base.edges + self.framing_edges,
        )

    @property
    def d(self) -> int:
        return max(self.zeta, default=0)

    def extended_dim(self, alpha: Sequence[int]) -> np.ndarray:
        """(1, alpha)."""
        return np.concatenate([[1], self.base.vector(alpha)])

    def extended_weight(self, lam: Sequence[complex], alpha: Sequence[int]):
        """(-lambda . alpha, lambda)."""
        lam = self.base.vector(lam, dtype=complex)
        alpha = self.base.vector(alpha)
        return np.concatenate([[-np.dot(lam, alpha)], lam])
