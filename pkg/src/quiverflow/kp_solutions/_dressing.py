"""The dressing operator M of a seed and the Lax data L, R_r built from it.

    M = 1 - sum_{i,j} e_i w_i (X - x)^{-1} (Y - y)^{-1} v_j e_j

on the block lift (X, Y, v_i, w_i) of the seed. With (Y - y)^{-1} =
-sum_l Y^l y^{-l-1} and y^{-s} e_j = e_{j-s} y^{-s} the normal form reads

    M = 1 - sum_l sum_{i,j} e_i [w_i (x - X)^{-1} Y^l v_j] e_{j-l-1} y^{-l-1}.
"""

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from quiverflow.kp_solutions._seed import SolutionSeed, evolve_all
from quiverflow.logger import get_logger
from quiverflow.operator_algebra import (
    CrossedElement,
    HBarElement,
    MatrixOperator,
    RationalFunction,
    combine,
    crossed_mul,
    invert_unitriangular,
)

logger = get_logger(__name__)

CLUSTER_TOL = 1e-6


def _cluster_eigenvalues(values: np.ndarray, tol: float) -> np.ndarray:
    """Replace every cluster of nearly equal values by its mean."""
    values = values.copy()
    scale = max(1.0, float(np.abs(values).max(initial=0.0)))
    assigned = np.zeros(values.size, dtype=bool)
    for i in range(values.size):
        if assigned[i]:
            continue
        members = (~assigned) & (np.abs(values - values[i]) <= tol * scale)
        values[members] = values[members].mean()
        assigned |= members
    return values


def resolvent(
    X: np.ndarray, cluster: float = CLUSTER_TOL
) -> list[list[RationalFunction]]:
    """(x - X)^{-1} entrywise in partial fractions, via a Schur form of X.

    Eigenvalues closer than cluster (relative) are treated as one pole.
    """
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    n = X.shape[0]
    if n == 0:
        return []
    T, Q = scipy.linalg.schur(X, output="complex")
    diagonal = _cluster_eigenvalues(np.diag(T), cluster)
    S = [[RationalFunction() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        S[j][j] = RationalFunction.pole(diagonal[j])
        for i in range(j - 1, -1, -1):
            tail = combine((T[i, k], S[k][j]) for k in range(i + 1, j + 1))
            S[i][j] = S[i][i] * tail
    Q_conj = Q.conj()
    return [
        [
            combine(
                (Q[a, c] * Q_conj[b, e], S[c][e])
                for c in range(n)
                for e in range(c, n)
                if not S[c][e].is_zero
            )
            for b in range(n)
        ]
        for a in range(n)
    ]


def build_M(
    seed: SolutionSeed, times: Sequence[tuple[int, int | None, float]] = ()
) -> MatrixOperator:
    """M(t) as a d x d operator over the seed's algebra; times are (l, r, t)."""
    seed = evolve_all(seed, times)
    algebra = seed.algebra
    m, d = seed.m, seed.d
    identity = MatrixOperator.identity(algebra, d)
    if seed.size == 0:
        return identity
    lift = seed.point.lift()
    R = resolvent(lift.X)
    framed = [i for i in range(m) if lift.v[i].shape[1] > 0]
    rows = {
        i: [
            [
                combine((lift.w[i][r, b], R[b][c]) for b in range(lift.size))
                for c in range(lift.size)
            ]
            for r in range(lift.w[i].shape[0])
        ]
        for i in framed
    }
    eps = [CrossedElement.idempotent(k, m) for k in range(m)]
    terms: dict[tuple[int, int], dict[int, list[CrossedElement]]] = defaultdict(
        lambda: defaultdict(list)
    )
    power = np.eye(lift.size, dtype=complex)
    for ell in range(algebra.depth):
        order = -ell - 1
        for j in framed:
            column = power @ lift.v[j]
            for i in framed:
                for r, row in enumerate(rows[i]):
                    for s in range(column.shape[1]):
                        f = combine(
                            (column[c, s], row[c])
                            for c in range(lift.size)
                            if column[c, s] != 0
                        )
                        if f.is_zero:
                            continue
                        coef = crossed_mul(
                            crossed_mul(eps[i], CrossedElement.scalar(m, f)),
                            eps[(j - ell - 1) % m],
                        )
                        terms[(r, s)][order].append(-coef)
        power = power @ lift.Y

    def entry(r: int, s: int) -> HBarElement:
        summed = {
            k: _sum_crossed(parts, m) for k, parts in terms.get((r, s), {}).items()
        }
        tail = HBarElement(algebra, summed, algebra.low, truncated=True)
        return identity.entries[r][s] + tail

    M = MatrixOperator.from_function(d, entry)
    logger.debug(f"Built M for a seed of size {seed.size}, d={d}, m={m}.")
    return M


def _sum_crossed(parts: list[CrossedElement], m: int) -> CrossedElement:
    return CrossedElement(
        tuple(combine((1.0, p.parts[j]) for p in parts) for j in range(m))
    )


@dataclass(frozen=True, eq=False)
class LaxData:
    M: MatrixOperator
    M_inverse: MatrixOperator
    L: MatrixOperator
    R: tuple[MatrixOperator, ...]
    seed: SolutionSeed

    @property
    def d(self) -> int:
        return self.L.d

    def poles(self) -> set[complex]:
        return self.M.poles() | self.L.poles()

    def coefficient(self, k: int, r: int = 0, s: int = 0) -> CrossedElement:
        """Coefficient of y^k in the (r, s) entry of L."""
        return self.L.entries[r][s].coefficient(k)

    def power(self, ell: int) -> MatrixOperator:
        """L^l."""
        result = MatrixOperator.identity(self.L.algebra, self.d)
        for _ in range(ell):
            result = result * self.L
        return result

    def generator(self, ell: int, r: int | None) -> MatrixOperator:
        """L^l R_r, or L^l when r is None."""
        power = self.power(ell)
        return power if r is None else power * self.R[r - 1]


def dress(M: MatrixOperator, seed: SolutionSeed) -> LaxData:
    """L = M A y M^{-1} and R_r = M E_r M^{-1}."""
    algebra = M.algebra
    M_inverse = invert_unitriangular(M)
    L = M * MatrixOperator.scaled_y(algebra, seed.a_diagonal) * M_inverse
    R = tuple(
        M * MatrixOperator.unit(algebra, M.d, r) * M_inverse for r in range(1, M.d + 1)
    )
    return LaxData(M, M_inverse, L, R, seed)
