import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from quiverflow.logger import get_logger
from quiverflow.quiver_core._quiver import LoopVertexError, Quiver
from quiverflow.utils.common import RootKind, TriState

logger = get_logger(__name__)

WEIGHT_ATOL = 1e-12


class RootPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class RootClass:
    kind: RootKind
    sign: int = 0  # +1 / -1 for roots, 0 for NotRoot
    chain: tuple[str, ...] = ()
    reduced: tuple[int, ...] = ()  # image of |alpha| under the chain

    @property
    def is_root(self) -> bool:
        return self.kind != RootKind.NOT_ROOT

    def __str__(self) -> str:
        if not self.is_root:
            return str(self.kind)
        return f"{self.kind}({'+' if self.sign > 0 else '-'})"


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    exact: bool
    witness: tuple[int, ...] | None = None
    bound: int | None = None


@dataclass(frozen=True)
class SearchResult:
    state: TriState
    witness: tuple[tuple[int, ...], ...] = ()
    bound: int | None = None
    explored: int = 0


def _ints(vector) -> tuple[int, ...]:
    return tuple(int(x) for x in vector)


def bilinear_form(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """2 sum alpha_i beta_i - sum_a (alpha_t beta_h + alpha_h beta_t)."""
    alpha = quiver.vector(alpha)
    beta = quiver.vector(beta)
    return int(alpha @ quiver.cartan @ beta)


def tits_forms(quiver: Quiver, alpha: Sequence[int]) -> tuple[int, int]:
    """Return (q, p) with q = (alpha, alpha) / 2 and p = 1 - q."""
    q = bilinear_form(quiver, alpha, alpha) // 2
    return q, 1 - q


def _check_loop_free(quiver: Quiver, k: str) -> int:
    index = quiver.index(k)
    if quiver.has_loop(k):
        error_msg = f"Vertex {k!r} carries a loop and admits no reflection."
        logger.error(error_msg)
        raise LoopVertexError(error_msg)
    return index


def reflect_dim(quiver: Quiver, k: str, alpha: Sequence[int]) -> np.ndarray:
    """s_k alpha = alpha - (alpha, eps_k) eps_k."""
    index = _check_loop_free(quiver, k)
    alpha = quiver.vector(alpha)
    result = alpha.copy()
    result[index] -= int(alpha @ quiver.cartan[:, index])
    return result


def reflect_weight(quiver: Quiver, k: str, lam: Sequence[complex]) -> np.ndarray:
    """(r_k lambda)_j = lambda_j - (eps_k, eps_j) lambda_k."""
    index = _check_loop_free(quiver, k)
    lam = quiver.vector(lam, dtype=complex)
    return lam - quiver.cartan[index] * lam[index]


def has_connected_support(quiver: Quiver, alpha: np.ndarray) -> bool:
    support = [v for v, a in zip(quiver.vertices, alpha, strict=True) if a != 0]
    if not support:
        return False
    return nx.is_connected(quiver.support_graph(support))


def in_fundamental_domain(quiver: Quiver, alpha: np.ndarray) -> bool:
    """alpha >= 0, nonzero, (alpha, eps_i) <= 0 for all i, connected support."""
    if np.any(alpha < 0) or not np.any(alpha):
        return False
    if np.any(quiver.cartan @ alpha > 0):
        return False
    return has_connected_support(quiver, alpha)


def classify_root(quiver: Quiver, alpha: Sequence[int]) -> RootClass:
    """Reflection descent to a simple root or to the fundamental domain."""
    alpha = quiver.vector(alpha)
    if not np.any(alpha) or (np.any(alpha > 0) and np.any(alpha < 0)):
        return RootClass(RootKind.NOT_ROOT)
    sign = 1 if np.any(alpha > 0) else -1
    current = sign * alpha
    chain: list[str] = []
    loop_free = [quiver.index(v) for v in quiver.loop_free]
    while True:
        if current.sum() == 1:
            (i,) = np.flatnonzero(current)
            if i in loop_free:
                return RootClass(RootKind.REAL, sign, tuple(chain), _ints(current))
        pairings = quiver.cartan @ current
        positive = [i for i in loop_free if pairings[i] > 0]
        if not positive:
            if np.all(pairings <= 0) and has_connected_support(quiver, current):
                return RootClass(RootKind.IMAGINARY, sign, tuple(chain), _ints(current))
            return RootClass(RootKind.NOT_ROOT, chain=tuple(chain))
        k = positive[0]
        current = current.copy()
        current[k] -= pairings[k]
        chain.append(quiver.vertices[k])
        if np.any(current < 0):
            return RootClass(RootKind.NOT_ROOT, chain=tuple(chain))


def lattice_box(quiver: Quiver, height: int, upper: Sequence[int] | None = None):
    """Nonzero nonnegative vectors of height <= height, optionally below upper."""
    limits = (
        [height] * quiver.size if upper is None else [min(height, u) for u in upper]
    )
    for vector in itertools.product(*(range(u + 1) for u in limits)):
        total = sum(vector)
        if 0 < total <= height:
            yield np.array(vector, dtype=int)


def positive_roots(
    quiver: Quiver, height: int, upper: Sequence[int] | None = None
) -> Iterator[np.ndarray]:
    for alpha in lattice_box(quiver, height, upper):
        if classify_root(quiver, alpha).is_root:
            yield alpha


def _cycle_order(quiver: Quiver) -> list[str] | None:
    """Cyclic vertex order if the underlying graph of Q is a single cycle."""
    graph = quiver.support_graph(quiver.vertices)
    if not nx.is_connected(graph):
        return None
    if any(d != 2 for _, d in graph.degree()):
        return None
    if quiver.size <= 2:
        return list(quiver.vertices)
    return [u for u, _ in nx.find_cycle(nx.Graph(graph))]


def is_regular(
    quiver: Quiver, lam: Sequence[complex], height_bound: int = 12
) -> RegularityResult:
    """Whether lambda . alpha != 0 for every root alpha.

    Exact on the cyclic family, bounded by height_bound elsewhere.
    """
    lam = quiver.vector(lam, dtype=complex)
    order = _cycle_order(quiver)
    if order is not None:
        positions = [quiver.index(v) for v in order]
        total = lam.sum()
        delta = (1,) * quiver.size
        if abs(total) <= WEIGHT_ATOL:
            return RegularityResult(False, True, witness=delta)
        m = len(positions)
        for start, length in itertools.product(range(m), range(1, m)):
            arc = [positions[(start + s) % m] for s in range(length)]
            ratio = lam[arc].sum() / total
            k = round(ratio.real)
            if abs(ratio - k) <= WEIGHT_ATOL:
                witness = np.zeros(quiver.size, dtype=int)
                witness[arc] = 1
                # j delta + S is annihilated at j = -ratio
                if -k >= 0:
                    witness = witness - k * np.array(delta)
                else:
                    witness = (k * np.array(delta)) - witness
                return RegularityResult(False, True, witness=_ints(witness))
        return RegularityResult(True, True)
    if height_bound < 1:
        error_msg = f"Expected height_bound >= 1, got {height_bound}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    for alpha in positive_roots(quiver, height_bound):
        if abs(lam @ alpha) <= WEIGHT_ATOL * max(1.0, np.abs(lam).max()):
            return RegularityResult(False, False, _ints(alpha), height_bound)
    return RegularityResult(True, False, bound=height_bound)


def annihilated_roots(
    quiver: Quiver, lam: np.ndarray, alpha: np.ndarray
) -> list[np.ndarray]:
    """Positive roots beta <= alpha with lambda . beta = 0."""
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    return [
        beta
        for beta in positive_roots(quiver, int(alpha.sum()), upper=alpha)
        if abs(lam @ beta) <= WEIGHT_ATOL * scale
    ]


def _decompositions(
    target: np.ndarray, parts: list[np.ndarray], bound: int
) -> Iterator[tuple[list[int] | None, int]]:
    """Yield multisets of part indices summing to target (nonincreasing order).

    Yields (None, explored) once if the bound on explored nodes is hit.
    """
    explored = 0
    stack: list[tuple[np.ndarray, int, list[int]]] = [(target, len(parts) - 1, [])]
    while stack:
        remaining, top, chosen = stack.pop()
        explored += 1
        if explored > bound:
            yield None, explored
            return
        if not np.any(remaining):
            yield chosen, explored
            continue
        for j in range(top, -1, -1):
            rest = remaining - parts[j]
            if np.all(rest >= 0):
                stack.append((rest, j, [*chosen, j]))


def rep_existence(
    quiver: Quiver, lam: Sequence[complex], alpha: Sequence[int], bound: int = 10_000
) -> SearchResult:
    """Decompose alpha into positive roots annihilated by lambda."""
    lam = quiver.vector(lam, dtype=complex)
    alpha = quiver.vector(alpha)
    if np.any(alpha < 0):
        error_msg = f"Expected a nonnegative dimension vector, got {alpha}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    if not np.any(alpha):
        return SearchResult(TriState.YES, bound=bound)
    parts = annihilated_roots(quiver, lam, alpha)
    logger.debug(f"{len(parts)=} candidate roots below {alpha=}")
    explored = 0
    for chosen, explored in _decompositions(alpha, parts, bound):
        if chosen is None:
            logger.warning(f"Decomposition search truncated after {explored} nodes.")
            return SearchResult(TriState.UNKNOWN, bound=bound, explored=explored)
        witness = tuple(_ints(parts[j]) for j in chosen)
        return SearchResult(TriState.YES, witness, bound=bound, explored=explored)
    return SearchResult(TriState.NO, bound=bound, explored=explored)


def sigma_lambda_test(
    quiver: Quiver, lam: Sequence[complex], alpha: Sequence[int], bound: int = 10_000
) -> SearchResult:
    """p(alpha) > sum p(beta_l) over every nontrivial R+_lambda decomposition."""
    lam = quiver.vector(lam, dtype=complex)
    alpha = quiver.vector(alpha)
    root = classify_root(quiver, alpha)
    if not root.is_root or root.sign < 0:
        error_msg = f"{alpha=} is not a positive root ({root})."
        logger.error(error_msg)
        raise RootPreconditionError(error_msg)
    if abs(lam @ alpha) > WEIGHT_ATOL * max(1.0, float(np.abs(lam).max())):
        error_msg = f"lambda . alpha = {lam @ alpha} is not zero."
        logger.error(error_msg)
        raise RootPreconditionError(error_msg)
    p_alpha = tits_forms(quiver, alpha)[1]
    parts = annihilated_roots(quiver, lam, alpha)
    p_parts = [tits_forms(quiver, beta)[1] for beta in parts]
    explored = 0
    for chosen, explored in _decompositions(alpha, parts, bound):
        if chosen is None:
            logger.warning(f"Sigma_lambda search truncated after {explored} nodes.")
            return SearchResult(TriState.UNKNOWN, bound=bound, explored=explored)
        if len(chosen) < 2:
            continue
        if p_alpha <= sum(p_parts[j] for j in chosen):
            witness = tuple(_ints(parts[j]) for j in chosen)
            return SearchResult(TriState.NO, witness, bound=bound, explored=explored)
    return SearchResult(TriState.YES, bound=bound, explored=explored)
