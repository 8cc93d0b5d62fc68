from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from quiverflow.config import get_config
from quiverflow.cyclic_systems._charts import (
    ChartKindError,
    DarbouxChart,
    chart_dimension,
    darboux_tangents,
    from_darboux,
    infer_kind,
)
from quiverflow.cyclic_systems._hamiltonians import (
    hlr_words,
    j_element,
)
from quiverflow.cyclic_systems._point import CyclicPoint
from quiverflow.hamiltonian_dynamics import flow_IA
from quiverflow.logger import get_logger
from quiverflow.quiver_core import star, variety_dimension
from quiverflow.rep_variety import TraceWord, word_gradient
from quiverflow.utils.common import ChartKind
from quiverflow.utils.linalg import numeric_rank, op_norm

logger = get_logger(__name__)


class PoleInputError(ValueError):
    pass


WordSum = Sequence[tuple[complex, TraceWord]]
Family = str | Sequence[WordSum]


def partial_fraction_identity(
    j: int, m: int, x: complex, y: complex
) -> tuple[complex, complex]:
    """Both sides of the partial fraction identity.

    x^{m-j-1} y^j / (x^m - y^m) = (1/m) sum_l mu^{-jl} / (x - mu^l y)
    """
    scale = max(abs(x) ** m, abs(y) ** m, 1e-300)
    if abs(x**m - y**m) <= 1e-14 * scale:
        error_msg = f"x^m = y^m for {x=}, {y=}, {m=}."
        logger.error(error_msg)
        raise PoleInputError(error_msg)
    lhs = x ** (m - j - 1) * y**j / (x**m - y**m)
    mu = np.exp(2j * np.pi / m)
    rhs = sum(mu ** (-j * ell) / (x - mu**ell * y) for ell in range(m)) / m
    return complex(lhs), complex(rhs)


def _family(cp: CyclicPoint, chart: DarbouxChart, family: Family) -> list[WordSum]:
    if not isinstance(family, str):
        return [list(terms) for terms in family]
    n, m, d = chart.n, chart.m, chart.d
    if family == "Hmk":
        labels = [(m * k, r) for k in range(1, n + 1) for r in range(1, d + 1)]
    elif family == "Hlr":
        labels = [(ell, r) for ell in range(1, n * m + 1) for r in range(1, d + 1)]
    elif family == "H0r":
        labels = [(0, r) for r in range(1, d + 1)]
    else:
        error_msg = f"Unknown family {family!r}. Expected Hmk, Hlr or H0r."
        logger.error(error_msg)
        raise ValueError(error_msg)
    return [[(-1.0, word) for word in hlr_words(cp, ell, r)] for ell, r in labels]


@dataclass(frozen=True)
class RankResult:
    rank: int
    sigma: np.ndarray

    @property
    def gap(self) -> float:
        """sigma_rank / sigma_{rank+1}, infinite when nothing is cut."""
        if self.rank == 0 or self.rank >= self.sigma.size:
            return float("inf")
        if self.sigma[self.rank] == 0:
            return float("inf")
        return float(self.sigma[self.rank - 1] / self.sigma[self.rank])


def independence_rank(
    chart: DarbouxChart, lam: Sequence[complex], family: Family = "Hlr"
) -> RankResult:
    """Numerical rank of the Jacobian of a family over the chart coordinates.

    Named families: Hmk (H_{mk,r}, k <= n), Hlr (H_{l,r}, l <= nm), H0r.
    Custom families are sums of coefficient times trace word. Each row is
    d tr(word) = tr(G dV) chained with the exact tangents of from_darboux.
    """
    cp = from_darboux(chart, lam)
    tangents = darboux_tangents(chart, lam)
    sums = _family(cp, chart, family)
    jacobian = np.zeros((len(sums), len(tangents)), dtype=complex)
    for row, terms in enumerate(sums):
        for coefficient, word in terms:
            for letter in set(word.letters):
                gradient = word_gradient(cp.point, word, letter)
                jacobian[row] += coefficient * np.array(
                    [np.sum(gradient * tangent[letter].T) for tangent in tangents]
                )
    rank, sigma = numeric_rank(jacobian, get_config().tolerances.rank_cutoff)
    logger.info(f"Jacobian of {len(sums)} functions has rank {rank}.")
    return RankResult(rank, sigma)


def symplectic_form_residual(chart: DarbouxChart, lam: Sequence[complex]) -> float:
    """Largest entry of omega pulled back by from_darboux minus the canonical form.

    omega = sum over unstarred a of tr(dV_{a*} ^ dV_a).
    """
    derivatives = darboux_tangents(chart, lam)
    quiver = from_darboux(chart, lam).point.quiver
    unstarred = [e.id for e in quiver.base_edges]
    size = len(derivatives)
    omega = np.zeros((size, size), dtype=complex)
    for i in range(size):
        for j in range(i + 1, size):
            value = sum(
                np.trace(derivatives[i][star(a)] @ derivatives[j][a])
                - np.trace(derivatives[j][star(a)] @ derivatives[i][a])
                for a in unstarred
            )
            omega[i, j], omega[j, i] = value, -value
    return float(np.abs(omega - chart.canonical_form()).max(initial=0.0))


def chart_dimension_audit(cp: CyclicPoint) -> tuple[int, int]:
    """(chart coordinates, dim of the variety) for the framing and dims of cp."""
    kind = infer_kind(cp.m, cp.zeta)
    n, d = cp.dims[0], cp.zeta[0]
    return chart_dimension(kind, n, cp.m, d), variety_dimension(cp.framed, cp.dims)


def embed_eps0_in_delta(cp: CyclicPoint) -> CyclicPoint:
    """Framing d*eps_0 inside d*delta with v_i = w_i = 0 for i != 0."""
    kind = infer_kind(cp.m, cp.zeta)
    if kind == ChartKind.DELTA:
        error_msg = "Point is already framed by d*delta."
        logger.error(error_msg)
        raise ChartKindError(error_msg)
    if kind == ChartKind.JORDAN:
        return cp
    m, d = cp.m, cp.zeta[0]
    v = [cp.v(0)] + [np.zeros((cp.dims[i], d), dtype=complex) for i in range(1, m)]
    w = [cp.w(0)] + [np.zeros((d, cp.dims[i]), dtype=complex) for i in range(1, m)]
    return cp.with_matrices(v=v, w=w)


def eps0_locus_drift(
    cp: CyclicPoint,
    ell: int,
    T: np.ndarray,
    t: float,
    steps: int = 4,
) -> float:
    """Largest |v_i|, |w_i| with i != 0 after flowing J_l(T) for time t.

    Zero (to integration accuracy) when m divides l.
    """
    if infer_kind(cp.m, cp.zeta) != ChartKind.DELTA:
        cp = embed_eps0_in_delta(cp)
    trajectory = flow_IA(cp.point, j_element(cp.framed, ell, T), t, steps=steps)
    final = CyclicPoint(cp.framed, trajectory.final)
    return max(
        (max(op_norm(final.v(i)), op_norm(final.w(i))) for i in range(1, cp.m)),
        default=0.0,
    )
