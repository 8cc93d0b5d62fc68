"""Darboux charts (x, p, phi, psi) on cyclic quiver varieties.

Particle a carries a position x_a, a momentum p_a and spin variables
phi_a (d x m) and psi_a (m x d); the charts with framing at vertex 0 only
keep the column i = 0 of phi_a and the row i = 0 of psi_a. The spins are
normalized by (phi_a)_{1,0} = 1 and tr(psi_a phi_a) = |lambda|.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from quiverflow.config import get_config
from quiverflow.cyclic_systems._point import CyclicPoint
from quiverflow.logger import get_logger
from quiverflow.utils.common import ChartKind
from quiverflow.utils.linalg import matrix_power_product

logger = get_logger(__name__)


class ChartBoundaryError(ValueError):
    """The point lies off the chart domain; pair names the offending particles."""

    def __init__(self, message: str, pair: tuple[int, int]):
        super().__init__(message)
        self.pair = pair


class ChartKindError(ValueError):
    pass


def infer_kind(m: int, zeta: Sequence[int]) -> ChartKind:
    """The chart family fitting the framing zeta of a cyclic quiver."""
    zeta = tuple(zeta)
    d = zeta[0]
    if d < 1:
        error_msg = f"No Darboux chart for framing {zeta}: zeta_0 must be positive."
        logger.error(error_msg)
        raise ChartKindError(error_msg)
    if m == 1:
        return ChartKind.JORDAN
    if zeta == (d,) + (0,) * (m - 1):
        return ChartKind.EPS0
    if zeta == (d,) * m:
        return ChartKind.DELTA
    error_msg = f"No Darboux chart for framing {zeta}. Expected d*eps_0 or d*delta."
    logger.error(error_msg)
    raise ChartKindError(error_msg)


def chart_dimension(kind: ChartKind, n: int, m: int, d: int) -> int:
    """Number of chart coordinates: 2nd, or 2nmd for framing d*delta."""
    return 2 * n * m * d if kind == ChartKind.DELTA else 2 * n * d


def _spin_width(kind: ChartKind, m: int) -> int:
    return m if kind == ChartKind.DELTA else 1


@dataclass(frozen=True)
class DarbouxChart:
    kind: ChartKind
    m: int
    x: np.ndarray
    p: np.ndarray
    phi: np.ndarray = field(repr=False)  # (n, d, width)
    psi: np.ndarray = field(repr=False)  # (n, width, d)

    def __post_init__(self):
        kind = ChartKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == ChartKind.JORDAN and self.m != 1:
            error_msg = f"Jordan charts need m = 1, got {self.m}."
            logger.error(error_msg)
            raise ChartKindError(error_msg)
        for name in ("x", "p", "phi", "psi"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=complex)
            )
        n, width = self.x.shape[0], _spin_width(kind, self.m)
        d = self.phi.shape[1] if self.phi.ndim == 3 else 0
        if (
            self.p.shape != (n,)
            or self.phi.shape != (n, d, width)
            or self.psi.shape != (n, width, d)
            or d < 1
        ):
            error_msg = (
                f"Inconsistent chart shapes x{self.x.shape} p{self.p.shape} "
                f"phi{self.phi.shape} psi{self.psi.shape} for {kind} with m={self.m}."
            )
            logger.error(error_msg)
            raise ValueError(error_msg)
        off = np.abs(self.phi[:, 0, 0] - 1)
        if n and off.max() > 1e-12:
            error_msg = f"Spin normalization (phi_a)_1 = 1 fails by {off.max():.2e}."
            logger.error(error_msg)
            raise ValueError(error_msg)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.phi.shape[1]

    @property
    def width(self) -> int:
        return self.phi.shape[2]

    @property
    def dimension(self) -> int:
        return chart_dimension(self.kind, self.n, self.m, self.d)

    @cached_property
    def free_spins(self) -> tuple[tuple[int, int], ...]:
        """(r, i) indices of phi entries that are coordinates; psi uses (i, r)."""
        return free_spin_indices(self.d, self.width)

    def spin_traces(self) -> np.ndarray:
        """tr(psi_a phi_a) per particle."""
        return np.einsum("air,ari->a", self.psi, self.phi)

    @classmethod
    def normalized(
        cls,
        kind: ChartKind,
        m: int,
        x: Sequence[complex],
        p: Sequence[complex],
        phi: np.ndarray,
        psi: np.ndarray,
        lam: Sequence[complex],
    ) -> "DarbouxChart":
        """Set (phi_a)_first = 1 and solve (psi_a)_first from tr(psi_a phi_a)."""
        phi = np.array(phi, dtype=complex)
        psi = np.array(psi, dtype=complex)
        phi[:, 0, 0] = 1
        psi[:, 0, 0] = 0
        rest = np.einsum("air,ari->a", psi, phi)
        psi[:, 0, 0] = complex(np.sum(lam)) - rest
        return cls(kind, m, np.asarray(x), np.asarray(p), phi, psi)

    @classmethod
    def random(
        cls,
        kind: ChartKind,
        n: int,
        m: int,
        d: int,
        lam: Sequence[complex],
        rng: np.random.Generator,
        spread: float = 1.0,
        momentum: float = 1.0,
    ) -> "DarbouxChart":
        """Positions in the first sector, sorted, with generic spins."""
        width = _spin_width(ChartKind(kind), m)
        radius = rng.uniform(0.5, 1.5, n) * spread
        angle = rng.uniform(0.05, 0.95, n) * 2 * np.pi / m
        x = radius * np.exp(1j * angle)
        x = x[np.lexsort((x.imag, x.real))]
        p = momentum * (rng.normal(size=n) + 1j * rng.normal(size=n))
        phi = rng.normal(size=(n, d, width)) + 1j * rng.normal(size=(n, d, width))
        psi = rng.normal(size=(n, width, d)) + 1j * rng.normal(size=(n, width, d))
        return cls.normalized(kind, m, x, p, 0.5 * phi, 0.5 * psi, lam)

    def coordinates(self) -> np.ndarray:
        """x, p, then the free phi and psi entries, paired in the same order."""
        phi = [self.phi[:, r, i] for r, i in self.free_spins]
        psi = [self.psi[:, i, r] for r, i in self.free_spins]
        phi = np.stack(phi, axis=1).reshape(-1) if phi else np.zeros(0)
        psi = np.stack(psi, axis=1).reshape(-1) if psi else np.zeros(0)
        return np.concatenate([self.x, self.p, phi, psi]).astype(complex)

    def with_coordinates(
        self, coordinates: np.ndarray, lam: Sequence[complex]
    ) -> "DarbouxChart":
        n, free = self.n, len(self.free_spins)
        coordinates = np.asarray(coordinates, dtype=complex)
        if coordinates.shape != (self.dimension,):
            error_msg = (
                f"Expected {self.dimension} coordinates, got {coordinates.shape}."
            )
            logger.error(error_msg)
            raise ValueError(error_msg)
        phi = np.zeros_like(self.phi)
        psi = np.zeros_like(self.psi)
        phi_free = coordinates[2 * n : 2 * n + n * free].reshape(n, free)
        psi_free = coordinates[2 * n + n * free :].reshape(n, free)
        for k, (r, i) in enumerate(self.free_spins):
            phi[:, r, i] = phi_free[:, k]
            psi[:, i, r] = psi_free[:, k]
        return DarbouxChart.normalized(
            self.kind, self.m, coordinates[:n], coordinates[n : 2 * n], phi, psi, lam
        )

    def canonical_form(self) -> np.ndarray:
        """sum dp_a ^ dx_a + sum dpsi ^ dphi on the coordinate basis."""
        n, free = self.n, len(self.free_spins)
        omega = np.zeros((self.dimension, self.dimension))
        for a in range(n):
            omega[n + a, a], omega[a, n + a] = 1, -1
        base = 2 * n
        for k in range(n * free):
            phi_index, psi_index = base + k, base + n * free + k
            omega[psi_index, phi_index], omega[phi_index, psi_index] = 1, -1
        return omega


def free_spin_indices(d: int, width: int) -> tuple[tuple[int, int], ...]:
    return tuple(
        (r, i) for r in range(d) for i in range(width) if (r, i) != (0, 0)
    )


def _collisions(values: np.ndarray, tol: float) -> tuple[int, int] | None:
    n = values.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            if abs(values[a] - values[b]) <= tol:
                return (a, b)
    return None


def _padded_spins(
    chart: DarbouxChart,
    phi: np.ndarray | None = None,
    psi: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """phi (n x d x m) and psi (n x m x d); charts framed at 0 pad with zeros."""
    n, d, m = chart.n, chart.d, chart.m
    full_phi = np.zeros((n, d, m), dtype=complex)
    full_psi = np.zeros((n, m, d), dtype=complex)
    full_phi[:, :, : chart.width] = chart.phi if phi is None else phi
    full_psi[:, : chart.width, :] = chart.psi if psi is None else psi
    return full_phi, full_psi


def _framing_blocks(
    kind: ChartKind, m: int, n: int, phi: np.ndarray, psi: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    if kind == ChartKind.DELTA:
        return [phi[:, :, i] for i in range(m)], [psi[:, i, :].T for i in range(m)]
    v = [phi[:, :, 0]] + [np.zeros((n, 0), dtype=complex)] * (m - 1)
    w = [psi[:, 0, :].T] + [np.zeros((0, n), dtype=complex)] * (m - 1)
    return v, w


def from_darboux(chart: DarbouxChart, lam: Sequence[complex]) -> CyclicPoint:
    """The gauge-fixed point with X_i = diag(x) for every i."""
    config = get_config()
    m, n = chart.m, chart.n
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (m,):
        error_msg = f"Expected {m} weights, got {lam.shape}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    total = complex(lam.sum())
    mismatch = np.abs(chart.spin_traces() - total)
    if n and mismatch.max() > config.tolerances.residual * max(1.0, abs(total)):
        error_msg = f"tr(psi_a phi_a) differs from |lambda| by {mismatch.max():.2e}."
        logger.error(error_msg)
        raise ValueError(error_msg)

    x = chart.x
    xm = x**m
    scale = max(1.0, float(np.abs(xm).max(initial=0.0)))
    tol = config.tolerances.chart_boundary * scale
    pair = _collisions(xm, tol)
    if pair is not None:
        error_msg = f"Particles {pair} collide: x_a^m = x_b^m."
        logger.error(error_msg)
        raise ChartBoundaryError(error_msg, pair)
    if m > 1:
        zero = np.flatnonzero(np.abs(x) <= tol)
        if zero.size:
            a = int(zero[0])
            error_msg = f"Particle {a} sits at the origin."
            logger.error(error_msg)
            raise ChartBoundaryError(error_msg, (a, a))

    phi, psi = _padded_spins(chart)
    # pairing[b, a, l] = (psi_b phi_a)_{ll}
    pairing = np.einsum("blr,arl->bal", psi, phi)
    diag_pairing = np.einsum("aal->al", pairing)

    shifts = lam[None, 1:] - diag_pairing[:, 1:]
    weights = (m - np.arange(1, m)) / m
    centre = shifts @ weights if m > 1 else np.zeros(n, dtype=complex)
    cumulative = np.concatenate(
        [np.zeros((n, 1), dtype=complex), np.cumsum(shifts, axis=1)], axis=1
    )
    denominator = xm[:, None] - xm[None, :]
    np.fill_diagonal(denominator, 1)

    X, Y = [], []
    for i in range(m):
        Y_i = np.zeros((n, n), dtype=complex)
        for j in range(m):
            coupling = np.outer(x**j, x ** (m - j - 1)) / denominator
            Y_i -= coupling * pairing[:, :, (i - j) % m].T
        diagonal = chart.p / m
        if m > 1:
            diagonal = diagonal + (centre - cumulative[:, i]) / x
        np.fill_diagonal(Y_i, diagonal)
        X.append(np.diag(x))
        Y.append(Y_i)

    v, w = _framing_blocks(chart.kind, m, n, phi, psi)
    return CyclicPoint.from_matrices(X, Y, v, w)


def _power_derivative(x: np.ndarray, k: int, dx: np.ndarray) -> np.ndarray:
    """d(x^k) along dx."""
    if k == 0:
        return np.zeros_like(dx)
    return k * x ** (k - 1) * dx


def darboux_tangents(
    chart: DarbouxChart, lam: Sequence[complex]
) -> list[dict[str, np.ndarray]]:
    """Exact derivatives of the from_darboux matrices, one dict per coordinate.

    The spin normalization is differentiated too, so column c is the pushforward
    of the c-th coordinate vector of chart.coordinates().
    """
    point = from_darboux(chart, lam)
    m, n = chart.m, chart.n
    lam = np.asarray(lam, dtype=complex)
    free = chart.free_spins
    x = chart.x.astype(complex)
    xm = x**m
    phi, psi = _padded_spins(chart)
    pairing = np.einsum("blr,arl->bal", psi, phi)
    shifts = lam[None, 1:] - np.einsum("aal->al", pairing)[:, 1:]
    weights = (m - np.arange(1, m)) / m
    centre = shifts @ weights if m > 1 else np.zeros(n, dtype=complex)
    cumulative = np.concatenate(
        [np.zeros((n, 1), dtype=complex), np.cumsum(shifts, axis=1)], axis=1
    )
    denominator = xm[:, None] - xm[None, :]
    np.fill_diagonal(denominator, 1)

    tangents = []
    for c in range(chart.dimension):
        dx = np.zeros(n, dtype=complex)
        dp = np.zeros(n, dtype=complex)
        dphi = np.zeros_like(chart.phi, dtype=complex)
        dpsi = np.zeros_like(chart.psi, dtype=complex)
        if c < n:
            dx[c] = 1
        elif c < 2 * n:
            dp[c - n] = 1
        elif c < 2 * n + n * len(free):
            a, k = divmod(c - 2 * n, len(free))
            r, i = free[k]
            dphi[a, r, i] = 1
        else:
            a, k = divmod(c - 2 * n - n * len(free), len(free))
            r, i = free[k]
            dpsi[a, i, r] = 1
        # (psi_a)_first follows tr(psi_a phi_a) = |lambda|
        dpsi[:, 0, 0] = -(
            np.einsum("air,ari->a", dpsi, chart.phi)
            + np.einsum("air,ari->a", chart.psi, dphi)
        )
        dphi, dpsi = _padded_spins(chart, dphi, dpsi)
        dpairing = np.einsum("blr,arl->bal", dpsi, phi) + np.einsum(
            "blr,arl->bal", psi, dphi
        )
        dshifts = -np.einsum("aal->al", dpairing)[:, 1:]
        dcentre = dshifts @ weights if m > 1 else np.zeros(n, dtype=complex)
        dcumulative = np.concatenate(
            [np.zeros((n, 1), dtype=complex), np.cumsum(dshifts, axis=1)], axis=1
        )
        dxm = _power_derivative(x, m, dx)
        ddenominator = dxm[:, None] - dxm[None, :]

        dX, dY = [], []
        for i in range(m):
            dY_i = np.zeros((n, n), dtype=complex)
            for j in range(m):
                left, right = x**j, x ** (m - j - 1)
                coupling = np.outer(left, right) / denominator
                dcoupling = (
                    np.outer(_power_derivative(x, j, dx), right)
                    + np.outer(left, _power_derivative(x, m - j - 1, dx))
                ) / denominator - coupling * ddenominator / denominator
                lag = (i - j) % m
                dY_i -= (
                    dcoupling * pairing[:, :, lag].T + coupling * dpairing[:, :, lag].T
                )
            diagonal = dp / m
            if m > 1:
                offset = centre - cumulative[:, i]
                diagonal = (
                    diagonal + (dcentre - dcumulative[:, i]) / x - offset * dx / x**2
                )
            np.fill_diagonal(dY_i, diagonal)
            dX.append(np.diag(dx))
            dY.append(dY_i)
        dv, dw = _framing_blocks(chart.kind, m, n, dphi, dpsi)
        tangent = CyclicPoint.from_matrices(dX, dY, dv, dw)
        tangents.append(dict(tangent.point.mats))
    logger.debug(f"Pushed {len(tangents)} coordinate vectors to {point.dims}.")
    return tangents


def to_darboux(cp: CyclicPoint, lam: Sequence[complex] | None = None) -> DarbouxChart:
    """Gauge-fix X_i to diag(x) and read off (x, p, phi, psi).

    x_a is the m-th root of the eigenvalue of X_{m-1}...X_0 with argument in
    [0, 2 pi / m); particles are sorted by (Re x, Im x).
    """
    config = get_config()
    kind = infer_kind(cp.m, cp.zeta)
    m, n = cp.m, cp.dims[0]
    if any(a != n for a in cp.dims):
        error_msg = f"Darboux charts need alpha = n*delta, got {cp.dims}."
        logger.error(error_msg)
        raise ChartKindError(error_msg)
    if lam is not None:
        residual = cp.relation_residual(lam)
        if residual > config.tolerances.residual * max(1.0, cp.point.scale()) ** 2:
            logger.warning(f"Point is off-shell by {residual:.2e}.")

    X = [cp.X(i) for i in range(m)]
    product = matrix_power_product(X, n)
    xi, S = scipy.linalg.eig(product)
    scale = max(1.0, float(np.abs(xi).max(initial=0.0)))
    tol = config.tolerances.chart_boundary * scale
    pair = _collisions(xi, tol)
    cutoff = 1 / config.tolerances.chart_boundary
    if pair is None and n > 1 and np.linalg.cond(S) > cutoff:
        gaps = np.abs(xi[:, None] - xi[None, :]) + np.diag(np.full(n, np.inf))
        a, b = np.unravel_index(np.argmin(gaps), gaps.shape)
        pair = (int(min(a, b)), int(max(a, b)))
    if pair is not None:
        error_msg = f"Particles {pair} collide: repeated eigenvalue of X_(m-1)...X_0."
        logger.error(error_msg)
        raise ChartBoundaryError(error_msg, pair)
    if m > 1:
        zero = np.flatnonzero(np.abs(xi) <= tol)
        if zero.size:
            a = int(zero[0])
            error_msg = f"Particle {a} sits at the origin."
            logger.error(error_msg)
            raise ChartBoundaryError(error_msg, (a, a))

    angle = np.mod(np.angle(xi), 2 * np.pi)
    x = np.abs(xi) ** (1 / m) * np.exp(1j * angle / m)
    order = np.lexsort((x.imag, x.real))
    x, S = x[order], S[:, order]

    D = np.diag(x)
    gauge = [np.linalg.inv(S)]
    for i in range(m - 1):
        # g_{i+1} = D g_i X_i^{-1}
        gauge.append(D @ np.linalg.solve(X[i].T, gauge[i].T).T)
    inverse = [np.linalg.inv(g) for g in gauge]
    closing = gauge[0] @ X[m - 1] @ inverse[m - 1]
    logger.debug(f"Gauge-fixed X_(m-1) off by {np.abs(closing - D).max():.2e}")

    Y = [gauge[i] @ cp.Y(i) @ inverse[(i + 1) % m] for i in range(m)]
    v = [gauge[i] @ cp.v(i) for i in range(m)]
    w = [cp.w(i) @ inverse[i] for i in range(m)]

    lead = v[0][:, 0]
    small = np.flatnonzero(np.abs(lead) <= config.tolerances.chart_boundary)
    if small.size:
        a = int(small[0])
        error_msg = f"Spin of particle {a} cannot be normalized: (phi_a)_first = 0."
        logger.error(error_msg)
        raise ChartBoundaryError(error_msg, (a, a))
    c = 1 / lead
    Y = [c[:, None] * y / c[None, :] for y in Y]
    v = [c[:, None] * v_i for v_i in v]
    w = [w_i / c[None, :] for w_i in w]

    p = sum(np.diag(y) for y in Y)
    width = _spin_width(kind, m)
    phi = np.stack([v[i] for i in range(width)], axis=2)
    psi = np.stack([w[i].T for i in range(width)], axis=1)
    phi[:, 0, 0] = 1
    return DarbouxChart(kind, m, x, p, phi, psi)
