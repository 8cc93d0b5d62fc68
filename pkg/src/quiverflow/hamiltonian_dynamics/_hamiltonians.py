import numpy as np

from quiverflow.hamiltonian_dynamics._lzeta import LZetaElement, default_path_cap
from quiverflow.hamiltonian_dynamics._paths import QStarPath, all_q_star_paths
from quiverflow.logger import get_logger
from quiverflow.quiver_core import INFINITY, FramedQuiver, star
from quiverflow.rep_variety import (
    RepPoint,
    TracePolynomial,
    TraceWord,
    WordError,
    trace_word,
)

logger = get_logger(__name__)


def _check_framed_point(point: RepPoint, framed: FramedQuiver) -> None:
    if point.quiver != framed.quiver.double():
        error_msg = "Point does not live on the double of the given framed quiver."
        logger.error(error_msg)
        raise ValueError(error_msg)


def framing_maps(
    point: RepPoint, framed: FramedQuiver
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """v_i (alpha_i x zeta_i) and w_i (zeta_i x alpha_i) for alpha_inf = 1.

    Column r of v_i is V_{b_{i,r}} and row r of w_i is V_{b_{i,r}*}.
    """
    _check_framed_point(point, framed)
    if point.dim(INFINITY) != 1:
        error_msg = f"Framing maps need alpha_inf = 1, got {point.dim(INFINITY)}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    v, w = {}, {}
    for vertex, z in zip(framed.base.vertices, framed.zeta, strict=True):
        ids = [framed.framing_edge_id(vertex, r) for r in range(1, z + 1)]
        d = point.dim(vertex)
        v[vertex] = (
            np.hstack([point.mat(b) for b in ids])
            if ids
            else np.zeros((d, 0), dtype=complex)
        )
        w[vertex] = (
            np.vstack([point.mat(star(b)) for b in ids])
            if ids
            else np.zeros((0, d), dtype=complex)
        )
    return v, w


def framing_updates(
    framed: FramedQuiver, v: dict[str, np.ndarray], w: dict[str, np.ndarray]
) -> dict[str, np.ndarray]:
    """Inverse of framing_maps: edge matrices from v_i and w_i."""
    updates = {}
    for vertex, z in zip(framed.base.vertices, framed.zeta, strict=True):
        for r in range(1, z + 1):
            b = framed.framing_edge_id(vertex, r)
            updates[b] = v[vertex][:, r - 1 : r]
            updates[star(b)] = w[vertex][r - 1 : r, :]
    return updates


def hp_word(framed: FramedQuiver, path: QStarPath) -> TraceWord:
    return path.trace_word(framed.quiver)


def hamiltonian_Hp(point: RepPoint, path: QStarPath) -> complex:
    """H_p = tr(V_p) for a Q*-cycle p; the trivial cycle gives alpha_i."""
    if not path.is_cycle:
        error_msg = f"H_p needs a cycle, got {path}."
        logger.error(error_msg)
        raise WordError(error_msg)
    for letter in path.letters:
        if point.quiver.sign(letter) != -1:
            error_msg = f"Letter {letter} of {path} is not in Q*."
            logger.error(error_msg)
            raise WordError(error_msg)
    return trace_word(point, path.trace_word(point.quiver))


def ia_observable(a: LZetaElement) -> TracePolynomial:
    """I_A = -sum_p sum_{s,r} (A_p)_{sr} tr(b_{j,r}* V_p b_{i,s}), p: i -> j."""
    framed = a.framed
    quiver = framed.quiver.double()
    words = []
    for path, matrix in a.components.items():
        rows, cols = matrix.shape
        for s in range(rows):
            for r in range(cols):
                coef = matrix[s, r]
                if coef == 0:
                    continue
                letters = (
                    framed.framing_edge_id(path.source, s + 1),
                    *path.letters,
                    star(framed.framing_edge_id(path.target, r + 1)),
                )
                words.append((-coef, TraceWord(quiver, letters)))
    return TracePolynomial.linear(words)


def integral_IA(point: RepPoint, a: LZetaElement) -> complex:
    _check_framed_point(point, a.framed)
    return ia_observable(a).value(point)


def hlr_element(framed: FramedQuiver, ell: int, r: int) -> LZetaElement:
    """E_r^{(l)} with the cap raised to l when needed."""
    return LZetaElement.unit(framed, ell, r, cap=max(ell, default_path_cap(framed)))


def hlr_observable(framed: FramedQuiver, ell: int, r: int) -> TracePolynomial:
    return ia_observable(hlr_element(framed, ell, r))


def hamiltonian_Hlr(
    point: RepPoint, framed: FramedQuiver, ell: int, r: int
) -> complex:
    """H_{l,r} = I_{E_r^{(l)}}."""
    return integral_IA(point, hlr_element(framed, ell, r))


def cycle_sum(point: RepPoint, framed: FramedQuiver, vertex: str, ell: int) -> complex:
    """sum of H_p over the Q*-cycles of length l at vertex."""
    return complex(
        sum(
            hamiltonian_Hp(point, p)
            for p in all_q_star_paths(framed.base, ell)
            if p.source == vertex and p.is_cycle
        )
    )
