from collections.abc import Sequence

import numpy as np

from quiverflow.config import get_config
from quiverflow.cyclic_systems._point import CyclicPoint
from quiverflow.hamiltonian_dynamics import (
    LZetaElement,
    default_path_cap,
    integral_IA,
)
from quiverflow.logger import get_logger
from quiverflow.quiver_core import FramedQuiver, star
from quiverflow.rep_variety import TraceWord

logger = get_logger(__name__)


class CrossCheckError(ValueError):
    pass


def y_product(cp: CyclicPoint, start: int, length: int) -> np.ndarray:
    """Y_start Y_{start+1} ... Y_{start+length-1}: V_{start+length} -> V_start."""
    result = np.eye(cp.dims[start % cp.m], dtype=complex)
    for i in range(start, start + length):
        result = result @ cp.Y(i)
    return result


def hamiltonian_Hmk(cp: CyclicPoint, k: int) -> complex:
    """H_{mk} = tr(Y_0 ... Y_{mk-1}), cross-checked against tr(Y^{mk}) / m."""
    if k < 1:
        error_msg = f"Expected k >= 1, got {k}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    m = cp.m
    value = complex(np.trace(y_product(cp, 0, m * k)))
    block = np.linalg.matrix_power(cp.lift().Y, m * k)
    lifted = complex(np.trace(block)) / m
    tol = get_config().tolerances.residual * max(1.0, abs(value))
    if abs(value - lifted) > tol:
        error_msg = f"H_{m * k}: word trace {value} and block trace {lifted} disagree."
        logger.error(error_msg)
        raise CrossCheckError(error_msg)
    return value


def hamiltonian_Hlr_cyclic(cp: CyclicPoint, ell: int, r: int) -> complex:
    """H_{l,r} = -sum_i w_{i-l,r} Y_{i-l} ... Y_{i-1} v_{i,r}."""
    if ell < 0 or r < 1:
        error_msg = f"Expected l >= 0 and r >= 1, got {ell=}, {r=}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    total = 0j
    for i in range(cp.m):
        source = (i - ell) % cp.m
        if r > cp.zeta[i] or r > cp.zeta[source]:
            continue
        word = y_product(cp, i - ell, ell)
        total -= complex(cp.w(source)[r - 1, :] @ word @ cp.v(i)[:, r - 1])
    return total


def hlr_words(cp: CyclicPoint, ell: int, r: int) -> list[TraceWord]:
    """Words at the framing vertex with H_{l,r} = -sum of their traces.

    Term i reads b_{i,r}, Y_{i-1}, ..., Y_{i-l}, b_{i-l,r}*.
    """
    if ell < 0 or r < 1:
        error_msg = f"Expected l >= 0 and r >= 1, got {ell=}, {r=}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    vertices = cp.framed.base.vertices
    words = []
    for i in range(cp.m):
        source = (i - ell) % cp.m
        if r > cp.zeta[i] or r > cp.zeta[source]:
            continue
        letters = (
            cp.framed.framing_edge_id(vertices[i], r),
            *(star(f"x{(i - s) % cp.m}") for s in range(1, ell + 1)),
            star(cp.framed.framing_edge_id(vertices[source], r)),
        )
        words.append(TraceWord(cp.point.quiver, letters))
    return words


def hmk_from_framing(cp: CyclicPoint, k: int, lam: Sequence[complex]) -> complex:
    """H_{mk} as -(1 / |lambda|) sum_r H_{mk,r}."""
    total = complex(np.sum(lam))
    if total == 0:
        error_msg = "The framing form of H_mk needs |lambda| != 0."
        logger.error(error_msg)
        raise ValueError(error_msg)
    hlr = sum(
        hamiltonian_Hlr_cyclic(cp, cp.m * k, r) for r in range(1, max(cp.zeta) + 1)
    )
    return -hlr / total


def j_element(framed: FramedQuiver, ell: int, T: np.ndarray) -> LZetaElement:
    """-A with A_p = T on every path of length l, so that J_l(T) = I_{-A}.

    T is cut to zeta_i x zeta_j on paths i -> j, empty for unframed vertices.
    """
    T = np.asarray(T, dtype=complex)
    cap = max(ell, default_path_cap(framed))
    return -LZetaElement.uniform(framed, ell, lambda rows, cols: T[:rows, :cols], cap)


def j_ell(cp: CyclicPoint, ell: int, T: np.ndarray) -> complex:
    """J_l(T) = sum_i tr(T w_{i-l} Y_{i-l} ... Y_{i-1} v_i)."""
    return integral_IA(cp.point, j_element(cp.framed, ell, T))


def exact_flow_mk(
    cp: CyclicPoint, times: Sequence[complex], lam: Sequence[complex]
) -> CyclicPoint:
    """Flow times[k-1] along t_{mk}: X -> X - |lambda| sum_k k t_{mk} Y^{mk-1}.

    t_{mk} is the flow of -sum_r H_{mk,r} = |lambda| H_{mk}; Y stays fixed.
    """
    lift = cp.lift()
    total = complex(np.sum(lam))
    shift = np.zeros_like(lift.X)
    for k, t in enumerate(times, start=1):
        if t == 0:
            continue
        shift += k * t * np.linalg.matrix_power(lift.Y, cp.m * k - 1)
    lifted = type(lift)(lift.dims, lift.X - total * shift, lift.Y, lift.v, lift.w)
    return lifted.to_point()
