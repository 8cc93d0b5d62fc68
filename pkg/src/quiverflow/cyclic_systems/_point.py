"""Points of cyclic quiver varieties in X_i, Y_i, v_i, w_i form.

X_i = V_{x_i}: V_i -> V_{i+1}, Y_i = V_{x_i*}: V_{i+1} -> V_i, and the framing
maps v_i (alpha_i x zeta_i), w_i (zeta_i x alpha_i). The relations read

    X_{i-1} Y_{i-1} - Y_i X_i + v_i w_i = lambda_i.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from quiverflow.hamiltonian_dynamics import framing_maps, framing_updates
from quiverflow.logger import get_logger
from quiverflow.quiver_core import INFINITY, FramedQuiver, cyclic_quiver, star
from quiverflow.rep_variety import RepPoint, RepShapeError, relation_residual
from quiverflow.utils.linalg import op_norm

logger = get_logger(__name__)


def _edge(i: int, m: int) -> str:
    return f"x{i % m}"


@dataclass(frozen=True)
class CyclicPoint:
    framed: FramedQuiver
    point: RepPoint

    def __post_init__(self):
        m = self.framed.base.size
        if self.framed.base != cyclic_quiver(m):
            error_msg = "CyclicPoint needs a framed cyclic quiver."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        if self.point.quiver != self.framed.quiver.double():
            error_msg = "Point does not live on the framed cyclic quiver."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        if self.point.dim(INFINITY) != 1:
            error_msg = f"Expected alpha_inf = 1, got {self.point.dim(INFINITY)}."
            logger.error(error_msg)
            raise RepShapeError(error_msg)

    @classmethod
    def from_matrices(
        cls,
        X: Sequence[np.ndarray],
        Y: Sequence[np.ndarray],
        v: Sequence[np.ndarray],
        w: Sequence[np.ndarray],
    ) -> "CyclicPoint":
        """Build from per-vertex lists; the framing is read off the v_i widths."""
        m = len(X)
        if not (len(Y) == len(v) == len(w) == m):
            error_msg = "X, Y, v and w need one entry per vertex."
            logger.error(error_msg)
            raise RepShapeError(error_msg)
        v = [np.atleast_2d(np.asarray(v_i, dtype=complex)) for v_i in v]
        w = [np.atleast_2d(np.asarray(w_i, dtype=complex)) for w_i in w]
        X = [np.atleast_2d(np.asarray(x, dtype=complex)) for x in X]
        Y = [np.atleast_2d(np.asarray(y, dtype=complex)) for y in Y]
        dims = [x.shape[1] for x in X]
        zeta = []
        for i in range(m):
            if v[i].size == 0 and v[i].shape[0] != dims[i]:
                v[i] = np.zeros((dims[i], 0), dtype=complex)
            zeta.append(v[i].shape[1])
            w[i] = w[i].reshape(zeta[i], dims[i])
        framed = FramedQuiver(cyclic_quiver(m), tuple(zeta))
        mats = {}
        for i in range(m):
            mats[_edge(i, m)] = X[i]
            mats[star(_edge(i, m))] = Y[i]
        base = framed.base.vertices
        mats.update(
            framing_updates(
                framed,
                {base[i]: v[i] for i in range(m)},
                {base[i]: w[i] for i in range(m)},
            )
        )
        point = RepPoint(framed.quiver.double(), (1, *dims), mats)
        return cls(framed, point)

    @property
    def m(self) -> int:
        return self.framed.base.size

    @property
    def dims(self) -> tuple[int, ...]:
        """alpha, without the framing vertex."""
        return self.point.dims[1:]

    @property
    def zeta(self) -> tuple[int, ...]:
        return self.framed.zeta

    def X(self, i: int) -> np.ndarray:
        return self.point.mat(_edge(i, self.m))

    def Y(self, i: int) -> np.ndarray:
        return self.point.mat(star(_edge(i, self.m)))

    @cached_property
    def _framing(self) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
        return framing_maps(self.point, self.framed)

    def v(self, i: int) -> np.ndarray:
        return self._framing[0][str(i % self.m)]

    def w(self, i: int) -> np.ndarray:
        return self._framing[1][str(i % self.m)]

    def weight(self, lam: Sequence[complex]) -> np.ndarray:
        """(-lambda . alpha, lambda)."""
        return self.framed.extended_weight(lam, self.dims)

    def relation_residual(self, lam: Sequence[complex]) -> float:
        return relation_residual(self.point, self.weight(lam))

    def with_matrices(
        self,
        X: Sequence[np.ndarray] | None = None,
        Y: Sequence[np.ndarray] | None = None,
        v: Sequence[np.ndarray] | None = None,
        w: Sequence[np.ndarray] | None = None,
    ) -> "CyclicPoint":
        m = self.m
        return CyclicPoint.from_matrices(
            [self.X(i) for i in range(m)] if X is None else X,
            [self.Y(i) for i in range(m)] if Y is None else Y,
            [self.v(i) for i in range(m)] if v is None else v,
            [self.w(i) for i in range(m)] if w is None else w,
        )

    def lift(self) -> "BlockLift":
        return BlockLift.from_point(self)


@dataclass(frozen=True)
class BlockLift:
    """X, Y on the direct sum of the V_i with v_i, w_i embedded."""

    dims: tuple[int, ...]
    X: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    v: tuple[np.ndarray, ...] = field(repr=False)
    w: tuple[np.ndarray, ...] = field(repr=False)

    @cached_property
    def offsets(self) -> tuple[slice, ...]:
        offsets, start = [], 0
        for d in self.dims:
            offsets.append(slice(start, start + d))
            start += d
        return tuple(offsets)

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return sum(self.dims)

    @classmethod
    def from_point(cls, cp: CyclicPoint) -> "BlockLift":
        m, dims = cp.m, cp.dims
        size = sum(dims)
        starts = np.concatenate([[0], np.cumsum(dims)])
        block = [slice(int(starts[i]), int(starts[i + 1])) for i in range(m)]
        X = np.zeros((size, size), dtype=complex)
        Y = np.zeros((size, size), dtype=complex)
        v, w = [], []
        for i in range(m):
            j = (i + 1) % m
            X[block[j], block[i]] += cp.X(i)
            Y[block[i], block[j]] += cp.Y(i)
            v_i = np.zeros((size, cp.zeta[i]), dtype=complex)
            v_i[block[i], :] = cp.v(i)
            w_i = np.zeros((cp.zeta[i], size), dtype=complex)
            w_i[:, block[i]] = cp.w(i)
            v.append(v_i)
            w.append(w_i)
        return cls(tuple(dims), X, Y, tuple(v), tuple(w))

    def projector(self, i: int) -> np.ndarray:
        """mu_i pi_i."""
        proj = np.zeros((self.size, self.size), dtype=complex)
        block = self.offsets[i % self.m]
        proj[block, block] = np.eye(self.dims[i % self.m])
        return proj

    def pattern_residual(self) -> float:
        """Largest entry of X, Y, v_i, w_i outside the cyclic block pattern."""
        m, worst = self.m, 0.0
        for i in range(m):
            for j in range(m):
                rows, cols = self.offsets[j], self.offsets[i]
                if j != (i + 1) % m and self.X[rows, cols].size:
                    worst = max(worst, float(np.abs(self.X[rows, cols]).max()))
                if i != (j + 1) % m and self.Y[rows, cols].size:
                    worst = max(worst, float(np.abs(self.Y[rows, cols]).max()))
            for j in range(m):
                if j == i:
                    continue
                v_block = self.v[i][self.offsets[j], :]
                w_block = self.w[i][:, self.offsets[j]]
                if v_block.size:
                    worst = max(worst, float(np.abs(v_block).max()))
                if w_block.size:
                    worst = max(worst, float(np.abs(w_block).max()))
        return worst

    def relation_residual(self, lam: Sequence[complex]) -> float:
        """|| [X, Y] + sum v_i w_i - sum lambda_i mu_i pi_i ||."""
        lhs = self.X @ self.Y - self.Y @ self.X
        for v_i, w_i in zip(self.v, self.w, strict=True):
            lhs = lhs + v_i @ w_i
        rhs = sum(lam_i * self.projector(i) for i, lam_i in enumerate(lam))
        return op_norm(lhs - rhs)

    def to_point(self) -> CyclicPoint:
        m = self.m
        X, Y, v, w = [], [], [], []
        for i in range(m):
            j = (i + 1) % m
            X.append(self.X[self.offsets[j], self.offsets[i]])
            Y.append(self.Y[self.offsets[i], self.offsets[j]])
            v.append(self.v[i][self.offsets[i], :])
            w.append(self.w[i][:, self.offsets[i]])
        return CyclicPoint.from_matrices(X, Y, v, w)
