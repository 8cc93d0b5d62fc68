from collections.abc import Iterator
from dataclasses import dataclass

import networkx as nx

from quiverflow.logger import get_logger
from quiverflow.quiver_core import Quiver, star
from quiverflow.rep_variety import TraceWord, WordError

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class QStarPath:
    """A path in Q*: the starred letters in the order they are applied.

    vertices lists every vertex visited, so len(vertices) == length + 1.
    """

    vertices: tuple[str, ...]
    letters: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.letters) + 1:
            error_msg = f"Path {self.letters} needs {len(self.letters) + 1} vertices."
            logger.error(error_msg)
            raise WordError(error_msg)

    @classmethod
    def trivial(cls, vertex: str) -> "QStarPath":
        return cls((vertex,))

    @classmethod
    def from_letters(
        cls, quiver: Quiver, letters: tuple[str, ...], source: str | None = None
    ) -> "QStarPath":
        quiver = quiver.double()
        if not letters:
            if source is None:
                error_msg = "The trivial path needs its vertex."
                logger.error(error_msg)
                raise WordError(error_msg)
            return cls.trivial(source)
        vertices = [quiver.edge(letters[0]).tail]
        for letter in letters:
            edge = quiver.edge(letter)
            if quiver.sign(letter) != -1:
                error_msg = f"Letter {letter} is not an edge of Q*."
                logger.error(error_msg)
                raise WordError(error_msg)
            if edge.tail != vertices[-1]:
                error_msg = f"Letters {letters} do not compose at {letter}."
                logger.error(error_msg)
                raise WordError(error_msg)
            vertices.append(edge.head)
        return cls(tuple(vertices), tuple(letters))

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_cycle(self) -> bool:
        return self.source == self.target

    def then(self, other: "QStarPath") -> "QStarPath":
        """self followed by other."""
        if self.target != other.source:
            error_msg = (
                f"Cannot follow a path ending at {self.target} "
                f"by one starting at {other.source}."
            )
            logger.error(error_msg)
            raise WordError(error_msg)
        return QStarPath(
            self.vertices + other.vertices[1:], self.letters + other.letters
        )

    def splits(self) -> Iterator[tuple["QStarPath", "QStarPath"]]:
        """All (first, second) with first.then(second) == self."""
        for cut in range(self.length + 1):
            yield (
                QStarPath(self.vertices[: cut + 1], self.letters[:cut]),
                QStarPath(self.vertices[cut:], self.letters[cut:]),
            )

    def trace_word(self, quiver: Quiver) -> TraceWord:
        if not self.is_cycle:
            error_msg = f"Path {self} is not a cycle."
            logger.error(error_msg)
            raise WordError(error_msg)
        return TraceWord(quiver.double(), self.letters, self.source)

    def __str__(self) -> str:
        if not self.letters:
            return f"1_{self.source}"
        return ",".join(self.letters)


@dataclass(frozen=True)
class PathSet:
    """All Q*-paths of a given length between two vertices."""

    source: str
    target: str
    length: int
    paths: tuple[QStarPath, ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def q_star_graph(quiver: Quiver) -> nx.MultiDiGraph:
    """Q* as a networkx multigraph keyed by the starred edge ids."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(quiver.vertices)
    for edge in quiver.base().edges:
        graph.add_edge(edge.head, edge.tail, key=star(edge.id))
    return graph


def _walks(graph: nx.MultiDiGraph, source: str, length: int) -> Iterator[QStarPath]:
    stack = [((source,), ())]
    while stack:
        vertices, letters = stack.pop()
        if len(letters) == length:
            yield QStarPath(vertices, letters)
            continue
        for _, head, key in graph.out_edges(vertices[-1], keys=True):
            stack.append((vertices + (head,), letters + (key,)))


def q_star_paths(quiver: Quiver, source: str, target: str, length: int) -> PathSet:
    if length < 0:
        error_msg = f"Expected a path length >= 0, got {length}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    quiver.index(source)
    quiver.index(target)
    graph = q_star_graph(quiver)
    paths = sorted(p for p in _walks(graph, source, length) if p.target == target)
    return PathSet(source, target, length, tuple(paths))


def q_star_cycles(quiver: Quiver, vertex: str, length: int) -> PathSet:
    """The cycles P_i of a given length at vertex i."""
    return q_star_paths(quiver, vertex, vertex, length)


def all_q_star_paths(quiver: Quiver, length: int) -> tuple[QStarPath, ...]:
    graph = q_star_graph(quiver)
    return tuple(
        sorted(p for source in quiver.vertices for p in _walks(graph, source, length))
    )


def has_q_star_cycle(quiver: Quiver) -> bool:
    return not nx.is_directed_acyclic_graph(q_star_graph(quiver))
