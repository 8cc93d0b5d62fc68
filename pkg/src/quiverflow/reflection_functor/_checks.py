import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from quiverflow.logger import get_logger
from quiverflow.quiver_core import Quiver, star
from quiverflow.reflection_functor._functor import (
    KernelMode,
    ReflectionResult,
    apply_reflection,
)
from quiverflow.rep_variety import (
    RepPoint,
    TracePolynomial,
    TraceWord,
    path_product,
    poisson_bracket,
    trace_word,
)
from quiverflow.utils.linalg import op_norm

logger = get_logger(__name__)

MAX_WORD_LENGTH = 8


def longest_simple_cycle(quiver: Quiver) -> int:
    graph = nx.DiGraph(quiver.double().digraph())
    return max((len(c) for c in nx.simple_cycles(graph)), default=0)


def _canonical(letters: tuple[str, ...]) -> bool:
    return all(letters <= letters[s:] + letters[:s] for s in range(1, len(letters)))


def generating_words(quiver: Quiver, max_length: int | None = None) -> list[TraceWord]:
    """Closed words up to rotation, of length <= min(8, 2 * longest simple cycle)."""
    quiver = quiver.double()
    if max_length is None:
        max_length = min(MAX_WORD_LENGTH, 2 * longest_simple_cycle(quiver))
    words = [TraceWord(quiver, (), v) for v in quiver.vertices]
    for start in quiver.vertices:
        stack = [(start, ())]
        while stack:
            vertex, letters = stack.pop()
            if letters and vertex == start and _canonical(letters):
                words.append(TraceWord(quiver, letters))
            if len(letters) == max_length:
                continue
            for edge in quiver.outgoing(vertex):
                stack.append((edge.head, letters + (edge.id,)))
    logger.debug(f"{len(words)=} generating words up to length {max_length}")
    return words


def involution_check(
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    mode: KernelMode = "svd",
    words: list[TraceWord] | None = None,
) -> float:
    """Largest trace discrepancy between V and F_k(F_k(V))."""
    first = apply_reflection(point, k, lam, mode=mode)
    second = apply_reflection(first.point, k, first.weight, mode=mode)
    if second.point.dims != point.dims:
        error_msg = f"Double reflection changed dims {point.dims} -> {second.dims}."
        logger.error(error_msg)
        raise AssertionError(error_msg)
    words = generating_words(point.quiver) if words is None else words
    return max(
        (abs(trace_word(second.point, w) - trace_word(point, w)) for w in words),
        default=0.0,
    )


def _violations(quiver: Quiver, word: TraceWord, k: str) -> list[int]:
    """Positions j with a_j entering k and a_{j+1} = a_j*."""
    letters = word.letters
    positions = []
    for j, letter in enumerate(letters):
        following = letters[(j + 1) % len(letters)]
        if quiver.edge(letter).head == k and following == star(letter):
            positions.append(j)
    return positions


def pullback_expansion(
    point: RepPoint, k: str, lam: Sequence[complex], word: TraceWord
) -> list[tuple[complex, tuple[str, ...], str]]:
    """tr of word on the reflected point as terms (coef, letters, start) over V.

    Each violating pair a_{j+1} a_j through k either stays or is replaced by
    its correction -lambda_k (-1)^{a_j}.
    """
    quiver = point.quiver
    lam_k = quiver.vector(lam, dtype=complex)[quiver.index(k)]
    letters = word.letters
    positions = _violations(quiver, word, k)
    terms = []
    for chosen in itertools.product((False, True), repeat=len(positions)):
        removed, coef = set(), 1.0 + 0j
        for j, drop in zip(positions, chosen, strict=True):
            if drop:
                removed |= {j, (j + 1) % len(letters)}
                coef *= -lam_k * quiver.sign(letters[j])
        kept = tuple(a for i, a in enumerate(letters) if i not in removed)
        if kept:
            start = quiver.edge(kept[0]).tail
        elif removed:
            # a single pair a_{j+1} a_j collapses to the identity on V_{t(a_j)}
            start = quiver.edge(letters[positions[0]]).tail
        else:
            start = word.vertex
        terms.append((coef, kept, start))
    return terms


@dataclass(frozen=True)
class PullbackCheck:
    lhs: complex
    rhs: complex
    match: bool
    direct: bool  # no letter pair cancels through k


def trace_pullback_check(
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    word: TraceWord,
    tol: float = 1e-9,
    result: ReflectionResult | None = None,
) -> PullbackCheck:
    """Compare tr(word) on the reflected point with its expansion on V.

    When no letter pair cancels through k the expansion is tr(word) itself.
    """
    result = apply_reflection(point, k, lam) if result is None else result
    lhs = trace_word(result.point, word)
    terms = pullback_expansion(point, k, lam, word)
    rhs = sum(
        coef * np.trace(path_product(point, letters, start))
        for coef, letters, start in terms
    )
    match = abs(lhs - rhs) <= tol * max(1.0, abs(rhs))
    return PullbackCheck(complex(lhs), complex(rhs), bool(match), len(terms) == 1)


def symplectic_proxy_check(
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    w1: TraceWord,
    w2: TraceWord,
    result: ReflectionResult | None = None,
) -> float:
    """|{tr w1, tr w2}(V) - {tr w1, tr w2}(V')| for V' the reflected point."""
    for word in (w1, w2):
        if _violations(point.quiver, word, k):
            logger.warning(f"Word {word} cancels through {k}; brackets may differ.")
    result = apply_reflection(point, k, lam) if result is None else result
    f1, f2 = TracePolynomial.word(w1), TracePolynomial.word(w2)
    before = poisson_bracket(point, f1, f2)
    after = poisson_bracket(result.point, f1, f2)
    return abs(before - after)


def lemma_residuals(point: RepPoint, result: ReflectionResult) -> dict[str, float]:
    """Residuals of pi mu = 1 and of the identities relating V and V'.

    pairing: V'_{b*} V'_a = -lambda_k (-1)^a delta_ab + V_{b*} V_a, a, b in H
    sum_left: sum_c (-1)^c V'_c V_{c*} = 0
    sum_right: sum_c (-1)^c V_c V'_{c*} = 0
    """
    quiver = point.quiver
    new = result.point
    k = result.vertex
    lam_k = -result.weight[quiver.index(k)]
    pi_mu = result.pi @ result.mu
    residuals = {"pi_mu": op_norm(pi_mu - np.eye(pi_mu.shape[0]))}
    pairing = 0.0
    for a in result.edges:
        for b in result.edges:
            lhs = new.mat(star(b.id)) @ new.mat(a.id)
            rhs = point.mat(star(b.id)) @ point.mat(a.id)
            if a.id == b.id:
                rhs = rhs - lam_k * quiver.sign(a.id) * np.eye(rhs.shape[0])
            pairing = max(pairing, op_norm(lhs - rhs))
    residuals["pairing"] = pairing
    left = np.zeros((new.dim(k), point.dim(k)), dtype=complex)
    right = np.zeros((point.dim(k), new.dim(k)), dtype=complex)
    for c in result.edges:
        sign = quiver.sign(c.id)
        left += sign * new.mat(c.id) @ point.mat(star(c.id))
        right += sign * point.mat(c.id) @ new.mat(star(c.id))
    residuals["sum_left"] = op_norm(left)
    residuals["sum_right"] = op_norm(right)
    return residuals
