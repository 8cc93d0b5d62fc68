"""The Lie algebra L_zeta of matrix-valued functions on Q*-paths.

A component A_p for p: i -> j maps C^{zeta_j} to C^{zeta_i}, a
zeta_i x zeta_j matrix. With p' traversed before p'' the bracket is

    [A, B]_p = sum_{p = p' then p''} A_{p'} B_{p''} - B_{p'} A_{p''},

the factor order that makes the shapes compose and gives
{I_A, I_B} = I_{[A, B]} for the bracket on Rep.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from quiverflow.config import get_config
from quiverflow.hamiltonian_dynamics._paths import (
    QStarPath,
    all_q_star_paths,
    has_q_star_cycle,
)
from quiverflow.logger import get_logger
from quiverflow.quiver_core import FramedQuiver

logger = get_logger(__name__)


class PathCapError(ValueError):
    pass


def default_path_cap(framed: FramedQuiver) -> int:
    config = get_config()
    if has_q_star_cycle(framed.base):
        return config.path_cap_cyclic_factor * framed.base.size
    return config.path_cap_general


def unit_matrix(rows: int, cols: int, r: int) -> np.ndarray:
    """E_r: the single entry (r, r) set to one, zero when r exceeds a side."""
    matrix = np.zeros((rows, cols), dtype=complex)
    if 1 <= r <= min(rows, cols):
        matrix[r - 1, r - 1] = 1
    return matrix


@dataclass(frozen=True)
class LZetaElement:
    framed: FramedQuiver
    components: Mapping[QStarPath, np.ndarray] = field(default_factory=dict)
    cap: int | None = None

    def __post_init__(self):
        cap = default_path_cap(self.framed) if self.cap is None else self.cap
        object.__setattr__(self, "cap", cap)
        components = {}
        for path, matrix in self.components.items():
            if path.length > cap:
                error_msg = f"Path {path} of length {path.length} exceeds cap {cap}."
                logger.error(error_msg)
                raise PathCapError(error_msg)
            shape = self.shape(path)
            matrix = np.asarray(matrix, dtype=complex)
            if matrix.shape != shape:
                error_msg = (
                    f"Component at {path} has shape {matrix.shape}, expected {shape}."
                )
                logger.error(error_msg)
                raise ValueError(error_msg)
            components[path] = matrix
        object.__setattr__(self, "components", components)

    def shape(self, path: QStarPath) -> tuple[int, int]:
        base = self.framed.base
        return (
            self.framed.zeta[base.index(path.source)],
            self.framed.zeta[base.index(path.target)],
        )

    @classmethod
    def uniform(
        cls,
        framed: FramedQuiver,
        length: int,
        matrix_for,
        cap: int | None = None,
    ) -> "LZetaElement":
        """A_p = matrix_for(rows, cols) for every Q*-path of the given length."""
        element = cls(framed, {}, cap)
        if length > element.cap:
            error_msg = f"Length {length} exceeds the path cap {element.cap}."
            logger.error(error_msg)
            raise PathCapError(error_msg)
        components = {}
        for path in all_q_star_paths(framed.base, length):
            rows, cols = element.shape(path)
            components[path] = matrix_for(rows, cols)
        return cls(framed, components, element.cap)

    @classmethod
    def unit(
        cls, framed: FramedQuiver, length: int, r: int, cap: int | None = None
    ) -> "LZetaElement":
        """E_r^{(l)}: E_r on every path of length l."""
        return cls.uniform(framed, length, lambda n, m: unit_matrix(n, m, r), cap)

    @classmethod
    def constant(
        cls,
        framed: FramedQuiver,
        length: int,
        matrix: np.ndarray,
        cap: int | None = None,
    ) -> "LZetaElement":
        """A_p = matrix for every path of the given length; framings must agree."""
        matrix = np.asarray(matrix, dtype=complex)

        def matrix_for(rows: int, cols: int) -> np.ndarray:
            if (rows, cols) != matrix.shape:
                error_msg = f"Matrix {matrix.shape} does not fit a {rows}x{cols} slot."
                logger.error(error_msg)
                raise ValueError(error_msg)
            return matrix

        return cls.uniform(framed, length, matrix_for, cap)

    @classmethod
    def random(
        cls,
        framed: FramedQuiver,
        max_length: int,
        rng: np.random.Generator,
        cap: int | None = None,
    ) -> "LZetaElement":
        element = cls(framed, {}, cap)
        components = {}
        for length in range(max_length + 1):
            for path in all_q_star_paths(framed.base, length):
                rows, cols = element.shape(path)
                components[path] = rng.normal(size=(rows, cols)) + 1j * rng.normal(
                    size=(rows, cols)
                )
        return cls(framed, components, element.cap)

    def component(self, path: QStarPath) -> np.ndarray:
        if path in self.components:
            return self.components[path]
        return np.zeros(self.shape(path), dtype=complex)

    def _combine(self, other: "LZetaElement", sign: int) -> "LZetaElement":
        components = dict(self.components)
        for path, matrix in other.components.items():
            components[path] = self.component(path) + sign * matrix
        return LZetaElement(self.framed, components, max(self.cap, other.cap))

    def __add__(self, other: "LZetaElement") -> "LZetaElement":
        return self._combine(other, 1)

    def __sub__(self, other: "LZetaElement") -> "LZetaElement":
        return self._combine(other, -1)

    def __mul__(self, scalar: complex) -> "LZetaElement":
        return LZetaElement(
            self.framed,
            {p: scalar * m for p, m in self.components.items()},
            self.cap,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "LZetaElement":
        return self * -1

    def norm(self) -> float:
        return max(
            (float(np.abs(m).max()) for m in self.components.values() if m.size),
            default=0.0,
        )

    def trace_at(self, vertex: str) -> complex:
        """tr(A_{1_vertex})."""
        return complex(np.trace(self.component(QStarPath.trivial(vertex))))


def lzeta_bracket(a: LZetaElement, b: LZetaElement) -> LZetaElement:
    """[A, B], raising PathCapError when a product path exceeds the cap."""
    cap = max(a.cap, b.cap)
    components: dict[QStarPath, np.ndarray] = {}
    for first, a_first in a.components.items():
        for second, b_second in b.components.items():
            if first.target != second.source:
                continue
            path = first.then(second)
            if path.length > cap:
                error_msg = f"Bracket produces path {path} beyond cap {cap}."
                logger.error(error_msg)
                raise PathCapError(error_msg)
            components[path] = components.get(path, 0) + a_first @ b_second
    for first, b_first in b.components.items():
        for second, a_second in a.components.items():
            if first.target != second.source:
                continue
            path = first.then(second)
            if path.length > cap:
                error_msg = f"Bracket produces path {path} beyond cap {cap}."
                logger.error(error_msg)
                raise PathCapError(error_msg)
            components[path] = components.get(path, 0) - b_first @ a_second
    return LZetaElement(a.framed, components, cap)
