"""How the framed Hamiltonians change under a reflection.

For V' the image of V under the reflection at k, every f among H_p, I_A,
H_{l,r} satisfies f(V) = f(V') + c, with c built from the weight and the
dims before the reflection.
"""

from collections.abc import Sequence

import numpy as np

from quiverflow.hamiltonian_dynamics import LZetaElement, cycle_sum, hamiltonian_Hp
from quiverflow.logger import get_logger
from quiverflow.quiver_core import INFINITY, FramedQuiver
from quiverflow.rep_variety import RepPoint

logger = get_logger(__name__)

TRANSPORT_MAX_LENGTH = 2


def transport_constants(
    framed: FramedQuiver,
    k: str,
    lam: Sequence[complex],
    alpha: Sequence[int],
) -> dict[int, complex]:
    """Shift c_r with H_{0,r}(V) = H_{0,r}(V') + c_r, for r = 1..max zeta."""
    quiver = framed.quiver
    lam = quiver.vector(lam, dtype=complex)
    alpha = quiver.vector(alpha)
    lam_k = lam[quiver.index(k)]
    shifts = {}
    for r in range(1, framed.d + 1):
        if k == INFINITY:
            total = sum(
                int(a) for a, z in zip(alpha[1:], framed.zeta, strict=True) if r <= z
            )
            shifts[r] = complex(lam_k * total)
        else:
            zeta_k = framed.zeta[framed.base.index(k)]
            shifts[r] = complex(-lam_k * alpha[0]) if r <= zeta_k else 0j
    return shifts


def ia_shift(
    framed: FramedQuiver,
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    a: LZetaElement,
) -> complex:
    """c with I_A(V) = I_A(V') + c when V is reflected at k."""
    quiver = framed.quiver
    lam = quiver.vector(lam, dtype=complex)
    lam_k = lam[quiver.index(k)]
    if k != INFINITY:
        return complex(-lam_k * point.dim(INFINITY) * a.trace_at(k))
    total = sum(
        np.trace(matrix) * hamiltonian_Hp(point, path)
        for path, matrix in a.components.items()
        if path.is_cycle
    )
    return complex(lam_k * total)


def hlr_shift(
    framed: FramedQuiver,
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    ell: int,
    r: int,
) -> complex:
    """c with H_{l,r}(V) = H_{l,r}(V') + c; a function of the H_p when k = inf."""
    if ell == 0:
        alpha = point.dims
        return transport_constants(framed, k, lam, alpha).get(r, 0j)
    if k != INFINITY:
        return 0j
    lam_inf = framed.quiver.vector(lam, dtype=complex)[0]
    total = sum(
        cycle_sum(point, framed, vertex, ell)
        for vertex, z in zip(framed.base.vertices, framed.zeta, strict=True)
        if r <= z
    )
    return complex(lam_inf * total)


def transport_report(
    framed: FramedQuiver,
    point: RepPoint,
    k: str,
    lam: Sequence[complex],
    max_length: int = TRANSPORT_MAX_LENGTH,
) -> dict[str, complex]:
    """Shifts of every H_{l,r} with l <= max_length, keyed `H<l>,<r>`."""
    report = {
        f"H{ell},{r}": hlr_shift(framed, point, k, lam, ell, r)
        for ell in range(max_length + 1)
        for r in range(1, framed.d + 1)
    }
    logger.debug(f"{k=} {report=}")
    return report
