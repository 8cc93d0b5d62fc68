"""d x d matrices over the truncated algebra, End(C^d) tensor H."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from quiverflow.config import get_config
from quiverflow.logger import get_logger
from quiverflow.operator_algebra._crossed import CrossedElement
from quiverflow.operator_algebra._hbar import (
    CherednikAlgebra,
    HBarElement,
    NotUnitriangularError,
    WindowError,
    check_unitriangular,
    coefficient_gap,
    hbar_mul,
    invert_hbar,
    neumann_inverse,
    split_pm,
)

logger = get_logger(__name__)

Entries = tuple[tuple[HBarElement, ...], ...]


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    entries: Entries

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        d = len(entries)
        if d == 0 or any(len(row) != d for row in entries):
            error_msg = "A matrix operator needs a nonempty square array of entries."
            logger.error(error_msg)
            raise ValueError(error_msg)
        algebra = entries[0][0].algebra
        if any(e.algebra != algebra for row in entries for e in row):
            error_msg = "Matrix entries must share one algebra and window."
            logger.error(error_msg)
            raise WindowError(error_msg)
        object.__setattr__(self, "entries", entries)

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def algebra(self) -> CherednikAlgebra:
        return self.entries[0][0].algebra

    @property
    def truncated(self) -> bool:
        return any(e.truncated for row in self.entries for e in row)

    @property
    def validity_floor(self) -> int:
        """Lowest order exact in every entry."""
        return max(e.validity_floor for row in self.entries for e in row)

    @classmethod
    def from_function(cls, d: int, entry) -> "MatrixOperator":
        return cls(tuple(tuple(entry(r, s) for s in range(d)) for r in range(d)))

    @classmethod
    def zero(cls, algebra: CherednikAlgebra, d: int) -> "MatrixOperator":
        return cls.from_function(d, lambda r, s: HBarElement.zero(algebra))

    @classmethod
    def identity(cls, algebra: CherednikAlgebra, d: int) -> "MatrixOperator":
        return cls.constant(algebra, np.eye(d))

    @classmethod
    def constant(
        cls, algebra: CherednikAlgebra, matrix: np.ndarray
    ) -> "MatrixOperator":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
        return cls.from_function(
            matrix.shape[0],
            lambda r, s: HBarElement.constant(algebra, matrix[r, s])
            if matrix[r, s] != 0
            else HBarElement.zero(algebra),
        )

    @classmethod
    def unit(cls, algebra: CherednikAlgebra, d: int, r: int) -> "MatrixOperator":
        """E_r, 1-based."""
        matrix = np.zeros((d, d), dtype=complex)
        matrix[r - 1, r - 1] = 1.0
        return cls.constant(algebra, matrix)

    @classmethod
    def scaled_y(
        cls, algebra: CherednikAlgebra, diagonal: Sequence[complex]
    ) -> "MatrixOperator":
        """diag(a_1, ..., a_d) y."""
        d = len(diagonal)
        return cls.from_function(
            d,
            lambda r, s: HBarElement.y(algebra, 1, diagonal[r])
            if r == s
            else HBarElement.zero(algebra),
        )

    def entry(self, r: int, s: int) -> HBarElement:
        return self.entries[r][s]

    def poles(self) -> set[complex]:
        return {z for row in self.entries for e in row for z in e.poles()}

    def map_entries(self, function) -> "MatrixOperator":
        return MatrixOperator(
            tuple(tuple(function(e) for e in row) for row in self.entries)
        )

    def _check(self, other: "MatrixOperator") -> None:
        if other.d != self.d:
            error_msg = f"Cannot combine {self.d}x{self.d} and {other.d}x{other.d}."
            logger.error(error_msg)
            raise ValueError(error_msg)

    def __add__(self, other: "MatrixOperator") -> "MatrixOperator":
        self._check(other)
        return MatrixOperator.from_function(
            self.d, lambda r, s: self.entries[r][s] + other.entries[r][s]
        )

    def __sub__(self, other: "MatrixOperator") -> "MatrixOperator":
        self._check(other)
        return MatrixOperator.from_function(
            self.d, lambda r, s: self.entries[r][s] - other.entries[r][s]
        )

    def __neg__(self) -> "MatrixOperator":
        return self.map_entries(lambda e: -e)

    def __mul__(self, other) -> "MatrixOperator":
        if isinstance(other, MatrixOperator):
            return matrix_mul(self, other)
        if isinstance(other, CrossedElement):
            return self.map_entries(lambda e: e * other)
        return self.map_entries(lambda e: e.scale(complex(other)))

    def __rmul__(self, other) -> "MatrixOperator":
        if isinstance(other, CrossedElement):
            return self.map_entries(lambda e: e.left_constant(other))
        return self.map_entries(lambda e: e.scale(complex(other)))


def _is_exact_zero(e: HBarElement) -> bool:
    return e.is_zero and not e.truncated


def matrix_mul(A: MatrixOperator, B: MatrixOperator) -> MatrixOperator:
    A._check(B)
    algebra = A.algebra

    def entry(r: int, s: int) -> HBarElement:
        total = HBarElement.zero(algebra)
        for k in range(A.d):
            a, b = A.entries[r][k], B.entries[k][s]
            if _is_exact_zero(a) or _is_exact_zero(b):
                continue
            total = total + hbar_mul(a, b)
        return total

    return MatrixOperator.from_function(A.d, entry)


def commutator(A, B):
    return A * B - B * A


def split_pm_matrix(M: MatrixOperator) -> tuple[MatrixOperator, MatrixOperator]:
    parts = [[split_pm(e) for e in row] for row in M.entries]
    plus = MatrixOperator(tuple(tuple(p for p, _ in row) for row in parts))
    minus = MatrixOperator(tuple(tuple(n for _, n in row) for row in parts))
    return plus, minus


def invert_unitriangular(M):
    """Inverse of 1 + (strictly negative orders) by a terminating Neumann series."""
    if isinstance(M, HBarElement):
        return invert_hbar(M)
    algebra = M.algebra
    tol = get_config().tolerances.residual
    for r in range(M.d):
        for s in range(M.d):
            entry = M.entries[r][s]
            if r == s:
                check_unitriangular(entry)
            elif any(k >= 0 and c.norm() > tol for k, c in entry.terms.items()):
                error_msg = f"Off-diagonal entry ({r}, {s}) has order >= 0."
                logger.error(error_msg)
                raise NotUnitriangularError(error_msg)
    identity = MatrixOperator.identity(algebra, M.d)
    strict = M.map_entries(
        lambda e: HBarElement(
            algebra,
            {k: c for k, c in e.terms.items() if k < 0},
            e.validity_floor,
            e.truncated,
        )
    )
    return neumann_inverse(identity + strict, identity, algebra.depth)


def matrix_gap(
    A: MatrixOperator, B: MatrixOperator, points: np.ndarray, floor: int | None = None
) -> float:
    """coefficient_gap over all entries."""
    A._check(B)
    lowest = max(A.validity_floor, B.validity_floor)
    if floor is not None:
        lowest = max(lowest, floor)
    return max(
        coefficient_gap(A.entries[r][s], B.entries[r][s], points, lowest)
        for r in range(A.d)
        for s in range(A.d)
    )
