"""Residual checks of the hierarchies carried by dressed seeds."""

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import polars as pl

from quiverflow.config import get_config
from quiverflow.cyclic_systems import exact_flow_mk
from quiverflow.kp_solutions._dressing import LaxData, build_M, dress
from quiverflow.kp_solutions._seed import SolutionSeed, evolve, evolve_all
from quiverflow.logger import get_logger
from quiverflow.operator_algebra import (
    CrossedElement,
    MatrixOperator,
    RationalFunction,
    combine,
    commutator,
    matrix_gap,
    sample_points,
    split_pm_matrix,
)

logger = get_logger(__name__)

SAMPLE_COUNT = 8


class PoleProximityError(ValueError):
    pass


class NotSphericalError(ValueError):
    pass


def _points(
    operators: Sequence[MatrixOperator],
    count: int,
    rng: np.random.Generator | None,
    exclusion: float,
) -> np.ndarray:
    rng = np.random.default_rng(get_config().seed) if rng is None else rng
    poles = set().union(*(op.poles() for op in operators))
    return sample_points(poles, count, rng, exclusion)


def _check_step(seed: SolutionSeed, h: float) -> None:
    scale = max(1.0, seed.point.point.scale())
    if not 1e-4 * scale <= h <= 1e-2 * scale:
        error_msg = f"Step h={h} outside [1e-4, 1e-2] x scale {scale:.3g}."
        logger.error(error_msg)
        raise ValueError(error_msg)


def _dressed(seed: SolutionSeed) -> LaxData:
    return dress(build_M(seed), seed)


def _shifted(
    seed: SolutionSeed, ell: int, r: int | None, h: float
) -> tuple[LaxData, LaxData]:
    return _dressed(evolve(seed, ell, r, h)), _dressed(evolve(seed, ell, r, -h))


def lax_residual(
    seed: SolutionSeed,
    ell: int,
    r: int | None = None,
    h: float | None = None,
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> float:
    """Central difference of L and R_s along t_{l,r} against [(L^l R_r)_+, .].

    The largest discrepancy over the exact orders at the sample points.
    """
    h = get_config().fd_step if h is None else h
    _check_step(seed, h)
    center = _dressed(seed)
    plus, minus = _shifted(seed, ell, r, h)
    B, _ = split_pm_matrix(center.generator(ell, r))
    points = _points([center.L, plus.L, minus.L], samples, rng, exclusion)
    scale = 1.0 / (2 * h)
    residual = matrix_gap((plus.L - minus.L) * scale, commutator(B, center.L), points)
    for s in range(center.d):
        derivative = (plus.R[s] - minus.R[s]) * scale
        residual = max(
            residual, matrix_gap(derivative, commutator(B, center.R[s]), points)
        )
    logger.info(f"Lax residual along t_({ell},{r}) with h={h}: {residual:.3e}")
    return residual


def lax_halving(
    seed: SolutionSeed,
    ell: int,
    r: int | None = None,
    h: float | None = None,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> tuple[float, float]:
    """Lax residuals at h and h / 2 on the same sample points.

    The central difference is second order, so the ratio approaches 4.
    """
    h = get_config().fd_step if h is None else h
    rng = np.random.default_rng(get_config().seed) if rng is None else rng
    points_seed = int(rng.integers(2**32))
    coarse, fine = (
        lax_residual(
            seed,
            ell,
            r,
            h=step,
            rng=np.random.default_rng(points_seed),
            exclusion=exclusion,
        )
        for step in (h, h / 2)
    )
    return coarse, fine


def m_equation_residual(
    seed: SolutionSeed,
    ell: int,
    r: int | None = None,
    h: float | None = None,
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> float:
    """Central difference of M against -(L^l R_r)_- M."""
    h = get_config().fd_step if h is None else h
    _check_step(seed, h)
    center = _dressed(seed)
    plus, minus = _shifted(seed, ell, r, h)
    _, B_minus = split_pm_matrix(center.generator(ell, r))
    points = _points([center.M, plus.M, minus.M], samples, rng, exclusion)
    derivative = (plus.M - minus.M) * (1.0 / (2 * h))
    residual = matrix_gap(derivative, -(B_minus * center.M), points)
    logger.info(f"M-equation residual along t_({ell},{r}): {residual:.3e}")
    return residual


def constraint_residuals(
    lax: LaxData,
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> dict[str, float]:
    """[L, R_r] = 0, R_r R_s = delta_rs R_r and sum_r R_r = 1."""
    points = _points([lax.L, lax.M], samples, rng, exclusion)
    algebra, d = lax.L.algebra, lax.d
    zero = MatrixOperator.zero(algebra, d)
    commute = max(
        matrix_gap(commutator(lax.L, R_r), zero, points) for R_r in lax.R
    )
    idempotent = 0.0
    for r, R_r in enumerate(lax.R):
        for s, R_s in enumerate(lax.R):
            target = R_r if r == s else zero
            idempotent = max(idempotent, matrix_gap(R_r * R_s, target, points))
    total = lax.R[0]
    for R_r in lax.R[1:]:
        total = total + R_r
    partition = matrix_gap(total, MatrixOperator.identity(algebra, d), points)
    return {"commute": commute, "idempotent": idempotent, "partition": partition}


def equivariance_residual(
    lax: LaxData,
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> float:
    """max_i of e_i L - L e_{i-1} over the exact orders, for spherical seeds."""
    if not lax.seed.spherical:
        error_msg = "Equivariance only holds for L built from a spherical seed."
        logger.error(error_msg)
        raise NotSphericalError(error_msg)
    m = lax.L.algebra.m
    points = _points([lax.L], samples, rng, exclusion)
    residual = 0.0
    for i in range(m):
        left = CrossedElement.idempotent(i, m) * lax.L
        right = lax.L * CrossedElement.idempotent(i - 1, m)
        residual = max(residual, matrix_gap(left, right, points))
    return residual


def dependence_residual(
    seed: SolutionSeed,
    t: float = 1.0,
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
    exclusion: float = 0.25,
) -> float:
    """Change of L after the same time t in every t_{0,r}."""
    before = _dressed(seed)
    after = _dressed(evolve(seed, 0, None, t))
    points = _points([before.L, after.L], samples, rng, exclusion)
    return matrix_gap(before.L, after.L, points)


Word = tuple[str, ...]


def _canonical(word: Word) -> Word:
    """Least cyclic rotation, traces being invariant."""
    return min(word[i:] + word[:i] for i in range(len(word)))


def _differentiate(terms: Counter, variable: str) -> Counter:
    """d/dvariable of sum coef tr(word) with dR = R E R; E_x = -1, E_tk = A_k."""
    out: Counter = Counter()
    for word, coef in terms.items():
        for i, token in enumerate(word):
            if token != "R":
                continue
            if variable == "x":
                new, factor = word[:i] + ("R", "R") + word[i + 1 :], -1.0
            else:
                new, factor = word[:i] + ("R", variable, "R") + word[i + 1 :], 1.0
            out[_canonical(new)] += factor * coef
    return out


def _trace_terms(terms: Counter, factors: dict[str, np.ndarray]) -> np.ndarray:
    total = 0.0
    for word, coef in terms.items():
        product = factors[word[0]]
        for token in word[1:]:
            product = product @ factors[token]
        total = total + coef * np.trace(product, axis1=-2, axis2=-1)
    return total


@dataclass(frozen=True)
class KPGrid:
    x: np.ndarray = field(repr=False)
    t2: np.ndarray = field(repr=False)
    t3: np.ndarray = field(repr=False)

    @classmethod
    def around(
        cls, seed: SolutionSeed, shape: tuple[int, int, int] = (10, 5, 5)
    ) -> "KPGrid":
        """A grid on a horizontal segment above the poles, times in [-0.1, 0.1]."""
        poles = np.linalg.eigvals(seed.point.X(0)) if seed.n else np.zeros(1)
        height = float(np.abs(poles.imag).max(initial=0.0)) + 1.5
        center = float(poles.real.mean())
        x = center + np.linspace(-2.0, 2.0, shape[0]) + 1j * height
        times = np.linspace(-0.1, 0.1, shape[1]), np.linspace(-0.1, 0.1, shape[2])
        return cls(x, *times)


def _require_scalar_kp(seed: SolutionSeed) -> None:
    if seed.m != 1 or seed.d != 1 or abs(seed.lam[0] - 1) > 1e-12:
        error_msg = "The KP equation check needs m = 1, d = 1 and lambda = 1."
        logger.error(error_msg)
        raise ValueError(error_msg)


def _kp_pde_values(
    seed: SolutionSeed, grid: KPGrid, radius: float
) -> tuple[np.ndarray, ...]:
    """3 u_22 - d_x(4 u_3 - 6 u u_x - u_xxx) for u = -2 tr (x - X(t))^{-2}.

    X(t) = X - 2 t_2 Y - 3 t_3 Y^2; derivatives are taken on trace words.
    Returns the flattened x, t2, t3, u and residual.
    """
    _require_scalar_kp(seed)
    n = seed.n
    X, Y = seed.point.X(0), seed.point.Y(0)
    x, t2, t3 = np.meshgrid(grid.x, grid.t2, grid.t3, indexing="ij")
    x, t2, t3 = x.ravel(), t2.ravel(), t3.ravel()
    if n == 0:
        zero = np.zeros_like(x)
        return x, t2, t3, zero, zero
    X_t = (
        X[None]
        - 2 * t2[:, None, None] * Y[None]
        - 3 * t3[:, None, None] * (Y @ Y)[None]
    )
    distance = np.abs(np.linalg.eigvals(X_t) - x[:, None]).min()
    if distance < radius:
        error_msg = f"Grid comes within {distance:.3e} of a pole (radius {radius})."
        logger.error(error_msg)
        raise PoleProximityError(error_msg)
    R = np.linalg.inv(x[:, None, None] * np.eye(n)[None] - X_t)
    factors = {"R": R, "t2": -2 * Y, "t3": -3 * (Y @ Y)}
    u_terms = Counter({("R", "R"): -2.0})
    u_x = _differentiate(u_terms, "x")
    u_xx = _differentiate(u_x, "x")
    u_xxxx = _differentiate(_differentiate(u_xx, "x"), "x")
    u_x3 = _differentiate(u_x, "t3")
    u_22 = _differentiate(_differentiate(u_terms, "t2"), "t2")
    u, ux, uxx = (_trace_terms(t, factors) for t in (u_terms, u_x, u_xx))
    residual = (
        3 * _trace_terms(u_22, factors)
        - 4 * _trace_terms(u_x3, factors)
        + 6 * (ux**2 + u * uxx)
        + _trace_terms(u_xxxx, factors)
    )
    return x, t2, t3, u, residual


def kp_pde_residual(seed: SolutionSeed, grid: KPGrid, radius: float = 0.25) -> float:
    """Largest KP residual of u = -2 tr (x - X(t))^{-2} over the grid."""
    residual = _kp_pde_values(seed, grid, radius)[-1]
    worst = float(np.abs(residual).max(initial=0.0))
    logger.info(f"KP residual on {residual.size} grid points: {worst:.3e}")
    return worst


def kp_pde_samples(
    seed: SolutionSeed, grid: KPGrid, radius: float = 0.25
) -> pl.DataFrame:
    """u and the KP residual per grid point; x is written by its real part."""
    x, t2, t3, u, residual = _kp_pde_values(seed, grid, radius)
    return pl.DataFrame(
        {
            "x": x.real,
            "t2": t2.real,
            "t3": t3.real,
            "Re u": u.real,
            "Im u": u.imag,
            "residual": np.abs(residual),
        }
    )


EmitFormat = Literal["rational", "csv"]


@dataclass(frozen=True)
class EmittedSolution:
    """Poles of u = 2 f_1 or, off the m = 1 family, the f_0 and f_1 of L."""

    times: tuple[complex, ...]
    poles: np.ndarray | None = field(default=None, repr=False)
    expression: str | None = None
    cross_check: float | None = None
    coefficients: dict[int, CrossedElement] | None = field(default=None, repr=False)

    def u(self, x) -> np.ndarray:
        if self.poles is None:
            error_msg = "u in closed form exists only for m = 1 seeds."
            logger.error(error_msg)
            raise ValueError(error_msg)
        x = np.asarray(x, dtype=complex)
        return -2.0 * sum((x - z) ** -2 for z in self.poles) + 0 * x

    def csv_rows(self, x: Sequence[complex]) -> list[dict[str, float]]:
        values = self.u(np.asarray(x))
        return [
            {"x": complex(p).real, "re_u": v.real, "im_u": v.imag}
            for p, v in zip(x, values, strict=True)
        ]


def _pole_expression(poles: np.ndarray) -> str:
    if poles.size == 0:
        return "u = 0"
    terms = [f"2/(x - ({complex(z):.17g}))^2" for z in poles]
    return "u = -(" + " + ".join(terms) + ")"


def emit_u(
    seed: SolutionSeed,
    times: Sequence[complex] = (),
    samples: int = SAMPLE_COUNT,
    rng: np.random.Generator | None = None,
) -> EmittedSolution:
    """u at times (t_1, t_2, ...) from the poles x_a(t), checked against 2 f_1 of L.

    Seeds other than scalar m = 1 ones report the coefficients f_0, f_1 of L
    after flowing every nonzero t_k in turn; those times must be real.
    """
    times = tuple(complex(t) for t in times)
    if seed.m != 1 or seed.d != 1 or seed.A is not None:
        if any(t.imag != 0 for t in times):
            error_msg = "Numerical flows take real times only."
            logger.error(error_msg)
            raise ValueError(error_msg)
        evolved = evolve_all(
            seed, [(k, None, t.real) for k, t in enumerate(times, start=1)]
        )
        lax = _dressed(evolved)
        coefficients = {0: lax.coefficient(0), -1: lax.coefficient(-1)}
        return EmittedSolution(times, coefficients=coefficients)
    point = exact_flow_mk(seed.point, times, seed.lam) if times else seed.point
    poles = np.sort_complex(np.linalg.eigvals(point.X(0))) if seed.n else np.zeros(0)
    cross_check = None
    if seed.n:
        evolved = seed.with_point(point).with_window(-(seed.n + 2), 2)
        lax = _dressed(evolved)
        f1 = lax.coefficient(-1).parts[0]
        u_closed = combine((-2.0, RationalFunction.pole(z, 2)) for z in poles)
        points = _points([lax.L], samples, rng, 0.25)
        u_values = u_closed(points)
        cross_check = float(np.abs(2 * f1(points) - u_values).max())
        if cross_check > 1e-9 * max(1.0, float(np.abs(u_values).max())):
            logger.warning(f"2 f_1 and the pole sum differ by {cross_check:.3e}.")
    return EmittedSolution(
        times,
        poles=poles.astype(complex),
        expression=_pole_expression(poles),
        cross_check=cross_check,
    )
