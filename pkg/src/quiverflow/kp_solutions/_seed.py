"""Seeds of rational solutions: on-shell cyclic points and their time evolution."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from quiverflow.config import Window, get_config
from quiverflow.cyclic_systems import (
    CyclicPoint,
    DarbouxChart,
    exact_flow_mk,
    from_darboux,
    infer_kind,
    j_element,
)
from quiverflow.hamiltonian_dynamics import flow_IA
from quiverflow.logger import get_logger
from quiverflow.operator_algebra import CherednikAlgebra, WindowError
from quiverflow.quiver_core import cyclic_quiver, is_regular
from quiverflow.rep_variety import is_simple
from quiverflow.utils.common import ChartKind

logger = get_logger(__name__)


class OffShellError(ValueError):
    pass


class NonRegularSeedError(ValueError):
    pass


class SphericalFlowError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SolutionSeed:
    """A cyclic point with lambda, the operator window and the optional diag(A)."""

    point: CyclicPoint
    lam: tuple[complex, ...]
    window: Window = field(default_factory=lambda: get_config().window)
    A: tuple[complex, ...] | None = None
    allow_reducible: bool = False

    def __post_init__(self):
        lam = tuple(complex(v) for v in self.lam)
        object.__setattr__(self, "lam", lam)
        if len(lam) != self.m:
            error_msg = f"Expected {self.m} entries of lambda, got {len(lam)}."
            logger.error(error_msg)
            raise ValueError(error_msg)
        infer_kind(self.m, self.point.zeta)
        scale = max(1.0, self.point.point.scale())
        residual = self.point.relation_residual(lam)
        if residual > get_config().tolerances.residual * scale**2:
            error_msg = f"Seed is off-shell: relation residual {residual:.3e}."
            logger.error(error_msg)
            raise OffShellError(error_msg)
        if -self.window.low < self.size + 2:
            error_msg = (
                f"Window [{self.window.low}, {self.window.high}] is too shallow for "
                f"a seed of total dimension {self.size}; need depth {self.size + 2}."
            )
            logger.error(error_msg)
            raise WindowError(error_msg)
        if self.A is not None:
            A = tuple(complex(a) for a in self.A)
            if len(A) != self.d or any(a == 0 for a in A):
                error_msg = f"A needs {self.d} nonzero diagonal entries, got {A}."
                logger.error(error_msg)
                raise ValueError(error_msg)
            object.__setattr__(self, "A", A)
        regular = is_regular(cyclic_quiver(self.m), lam).regular
        if not regular and not self.allow_reducible and not is_simple(self.point.point):
            error_msg = "lambda is not regular and the seed module is not simple."
            logger.error(error_msg)
            raise NonRegularSeedError(error_msg)

    @classmethod
    def from_chart(
        cls,
        chart: DarbouxChart,
        lam: Sequence[complex],
        window: Window | None = None,
        A: Sequence[complex] | None = None,
    ) -> "SolutionSeed":
        window = get_config().window if window is None else window
        point = from_darboux(chart, lam)
        return cls(point, tuple(lam), window, None if A is None else tuple(A))

    @classmethod
    def calogero_moser(
        cls,
        X: np.ndarray,
        Y: np.ndarray,
        v: np.ndarray,
        w: np.ndarray,
        lam: complex = 1.0,
        window: Window | None = None,
    ) -> "SolutionSeed":
        """m = 1 seed from [X, Y] + v w = lambda."""
        window = get_config().window if window is None else window
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        n = X.shape[0]
        v = np.asarray(v, dtype=complex).reshape(n, -1)
        w = np.asarray(w, dtype=complex).reshape(v.shape[1], n)
        point = CyclicPoint.from_matrices([X], [Y], [v], [w])
        return cls(point, (lam,), window)

    @property
    def m(self) -> int:
        return self.point.m

    @property
    def d(self) -> int:
        return max(self.point.zeta)

    @property
    def n(self) -> int:
        return self.point.dims[0]

    @property
    def size(self) -> int:
        """dim of the total space V = sum V_i."""
        return sum(self.point.dims)

    @property
    def kind(self) -> ChartKind:
        return infer_kind(self.m, self.point.zeta)

    @property
    def spherical(self) -> bool:
        return self.kind != ChartKind.DELTA

    @property
    def a_diagonal(self) -> tuple[complex, ...]:
        return self.A if self.A is not None else (1.0,) * self.d

    @property
    def algebra(self) -> CherednikAlgebra:
        return CherednikAlgebra.from_config(self.lam, self.window)

    def with_point(self, point: CyclicPoint) -> "SolutionSeed":
        return replace(self, point=point)

    def with_window(self, low: int, high: int) -> "SolutionSeed":
        return replace(self, window=Window(low=low, high=high))


def flow_weights(seed: SolutionSeed, ell: int, r: int | None) -> np.ndarray:
    """Diagonal of T with t_{l,r} the flow of J_l(T): a_r^l on the chosen r."""
    a = np.asarray(seed.a_diagonal, dtype=complex)
    weights = a**ell
    if r is not None:
        if not 1 <= r <= seed.d:
            error_msg = f"Expected 1 <= r <= {seed.d}, got {r}."
            logger.error(error_msg)
            raise ValueError(error_msg)
        mask = np.zeros(seed.d)
        mask[r - 1] = 1.0
        weights = weights * mask
    return weights


def evolve(
    seed: SolutionSeed,
    ell: int,
    r: int | None,
    t: float,
    steps: int | None = None,
) -> SolutionSeed:
    """Move the seed by time t along t_{l,r}, or along t_l = sum_r t_{l,r}.

    t_{l,r} is the flow of -H_{l,r}; with diag(A) it runs a_r^l times faster.
    """
    if ell < 0:
        error_msg = f"Expected l >= 0, got {ell}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    if t == 0:
        return seed
    if seed.spherical and ell % seed.m != 0:
        error_msg = f"Time t_{ell} leaves the spherical locus for m={seed.m}."
        logger.error(error_msg)
        raise SphericalFlowError(error_msg)
    lam = seed.lam
    if r is None and seed.A is None and ell > 0 and ell % seed.m == 0:
        times = np.zeros(ell // seed.m, dtype=complex)
        times[-1] = t
        return seed.with_point(exact_flow_mk(seed.point, times, lam))
    T = np.diag(flow_weights(seed, ell, r))
    element = j_element(seed.point.framed, ell, T)
    steps = steps or max(1, math.ceil(abs(t) / 0.1))
    trajectory = flow_IA(seed.point.point, element, t, steps=steps)
    return seed.with_point(CyclicPoint(seed.point.framed, trajectory.final))


def evolve_all(
    seed: SolutionSeed, times: Sequence[tuple[int, int | None, float]]
) -> SolutionSeed:
    """Apply commuting flows (l, r, t) in turn."""
    for ell, r, t in times:
        seed = evolve(seed, ell, r, t)
    return seed


def reducible_extension(
    seed: SolutionSeed,
    X: Sequence[np.ndarray],
    Y: Sequence[np.ndarray],
) -> SolutionSeed:
    """Direct sum of the seed with an unframed module T, lambda . dim T = 0.

    X[i]: T_i -> T_{i+1} and Y[i]: T_{i+1} -> T_i must satisfy the relations
    X_{i-1} Y_{i-1} - Y_i X_i = lambda_i on their own.
    """
    m, cp = seed.m, seed.point
    if len(X) != m or len(Y) != m:
        error_msg = f"The extra module needs {m} maps X_i and Y_i."
        logger.error(error_msg)
        raise ValueError(error_msg)
    X = [np.atleast_2d(np.asarray(x, dtype=complex)) for x in X]
    Y = [np.atleast_2d(np.asarray(y, dtype=complex)) for y in Y]
    dims = [X[i].shape[1] for i in range(m)]
    for i in range(m):
        X[i] = X[i].reshape(dims[(i + 1) % m], dims[i])
        Y[i] = Y[i].reshape(dims[i], dims[(i + 1) % m])
    scale = max([1.0] + [float(np.abs(a).max(initial=0.0)) for a in X + Y])
    for i in range(m):
        lhs = X[i - 1] @ Y[i - 1] - Y[i] @ X[i]
        residual = float(np.abs(lhs - seed.lam[i] * np.eye(dims[i])).max(initial=0.0))
        if residual > get_config().tolerances.residual * scale**2:
            error_msg = (
                f"Extra module violates the relation at vertex {i}: {residual:.3e}."
            )
            logger.error(error_msg)
            raise OffShellError(error_msg)
    if abs(np.dot(seed.lam, dims)) > get_config().tolerances.residual:
        error_msg = f"lambda . dim T = {np.dot(seed.lam, dims)} is not zero."
        logger.error(error_msg)
        raise ValueError(error_msg)

    def block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros(
            (a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex
        )
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0] :, a.shape[1] :] = b
        return out

    new_X = [block(cp.X(i), X[i]) for i in range(m)]
    new_Y = [block(cp.Y(i), Y[i]) for i in range(m)]
    new_v = [
        np.vstack([cp.v(i), np.zeros((dims[i], cp.zeta[i]), dtype=complex)])
        for i in range(m)
    ]
    new_w = [
        np.hstack([cp.w(i), np.zeros((cp.zeta[i], dims[i]), dtype=complex)])
        for i in range(m)
    ]
    point = CyclicPoint.from_matrices(new_X, new_Y, new_v, new_w)
    extended = replace(seed, point=point, allow_reducible=True)
    logger.info(f"Seed extended by a module of dimension {tuple(dims)}.")
    return extended
