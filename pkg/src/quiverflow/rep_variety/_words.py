import re
from dataclasses import dataclass

import numpy as np

from quiverflow.logger import get_logger
from quiverflow.quiver_core import Quiver, is_starred
from quiverflow.rep_variety._point import RepPoint

logger = get_logger(__name__)

_ALIAS = re.compile(r"^(?P<letter>[XY])(?P<index>\d*)$")


class WordError(ValueError):
    pass


def resolve_letter(quiver: Quiver, letter: str) -> str:
    """Edge id for a letter; X_i / Y_i alias x_i / x_i* on cyclic quivers."""
    match = _ALIAS.match(letter)
    if match is None:
        quiver.edge(letter)
        return letter
    index = match["index"] or "0"
    edge_id = f"x{index}" if match["letter"] == "X" else f"x{index}*"
    quiver.edge(edge_id)
    return edge_id


@dataclass(frozen=True)
class TraceWord:
    """A closed path a_1, ..., a_l in the double quiver, a_1 applied first.

    The empty word at a vertex is the trivial path 1_i.
    """

    quiver: Quiver
    letters: tuple[str, ...]
    vertex: str | None = None

    def __post_init__(self):
        if not self.letters:
            if self.vertex is None:
                error_msg = "The trivial word needs its vertex."
                logger.error(error_msg)
                raise WordError(error_msg)
            self.quiver.index(self.vertex)
            return
        edges = [self.quiver.edge(a) for a in self.letters]
        for first, second in zip(edges, edges[1:] + edges[:1], strict=True):
            if first.head != second.tail:
                error_msg = (
                    f"Word {self.letters} is not a closed path: "
                    f"{first.id} ends at {first.head}, {second.id} starts at "
                    f"{second.tail}."
                )
                logger.error(error_msg)
                raise WordError(error_msg)
        object.__setattr__(self, "vertex", edges[0].tail)

    @classmethod
    def parse(cls, quiver: Quiver, text: str) -> "TraceWord":
        """Parse `tr:Y,Y`, `tr:b0_1,x0*,b0_1*` or `tr:1_<vertex>`."""
        body = text.removeprefix("tr:")
        if body.startswith("1_"):
            return cls(quiver, (), body[2:])
        letters = tuple(resolve_letter(quiver, s.strip()) for s in body.split(","))
        return cls(quiver, letters)

    @property
    def in_star(self) -> bool:
        """Whether every letter lies in Q*."""
        return all(is_starred(a) for a in self.letters)

    def rotate(self, shift: int) -> "TraceWord":
        if not self.letters:
            return self
        shift %= len(self.letters)
        return TraceWord(self.quiver, self.letters[shift:] + self.letters[:shift])

    def __str__(self) -> str:
        if not self.letters:
            return f"tr:1_{self.vertex}"
        return "tr:" + ",".join(self.letters)


def path_product(point: RepPoint, letters: tuple[str, ...], start: str) -> np.ndarray:
    """V_{a_l} ... V_{a_1}, identity on V_start for the empty path."""
    result = np.eye(point.dim(start), dtype=complex)
    for a in letters:
        result = point.mat(a) @ result
    return result


def trace_word(point: RepPoint, word: TraceWord) -> complex:
    """tr(V_{a_l} ... V_{a_1}); the trivial word 1_i gives alpha_i."""
    if not word.letters:
        return complex(point.dim(word.vertex))
    return complex(np.trace(path_product(point, word.letters, word.vertex)))


def word_gradient(point: RepPoint, word: TraceWord, edge_id: str) -> np.ndarray:
    """G with d tr(word) = tr(G dV_a); G has the shape of V_a transposed.

    Each occurrence of a contributes the product of the remaining letters,
    read cyclically from the letter after it.
    """
    edge = point.quiver.edge(edge_id)
    gradient = np.zeros((point.dim(edge.tail), point.dim(edge.head)), dtype=complex)
    letters = word.letters
    for position, letter in enumerate(letters):
        if letter != edge_id:
            continue
        rest = letters[position + 1 :] + letters[:position]
        gradient += path_product(point, rest, edge.head)
    return gradient
