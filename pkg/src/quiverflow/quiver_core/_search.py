from collections import deque
from collections.abc import Callable, Sequence

import numpy as np
import polars as pl

from quiverflow.logger import get_logger
from quiverflow.quiver_core._catalog import framed_cyclic
from quiverflow.quiver_core._quiver import FramedQuiver, Quiver
from quiverflow.quiver_core._roots import (
    classify_root,
    in_fundamental_domain,
    lattice_box,
    reflect_dim,
    reflect_weight,
    tits_forms,
)
from quiverflow.utils.common import RootKind

logger = get_logger(__name__)

ADMISSIBLE_ATOL = 1e-12

OrbitState = tuple[np.ndarray, np.ndarray]


def orbit_search(
    quiver: Quiver,
    start: OrbitState,
    target: Callable[[np.ndarray, np.ndarray], bool],
    depth: int,
) -> list[str] | None:
    """Shortest chain of admissible reflections (lambda, alpha) -> target.

    Reflections run over loop-free k with lambda_k != 0; states are
    deduplicated on the dimension vector.
    """
    if depth < 0:
        error_msg = f"Expected depth >= 0, got {depth}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    lam0 = quiver.vector(start[0], dtype=complex)
    alpha0 = quiver.vector(start[1])
    queue = deque([(lam0, alpha0, [])])
    seen = {tuple(alpha0)}
    while queue:
        lam, alpha, chain = queue.popleft()
        if target(lam, alpha):
            return chain
        if len(chain) == depth:
            continue
        for k in quiver.loop_free:
            if abs(lam[quiver.index(k)]) <= ADMISSIBLE_ATOL:
                continue
            new_alpha = reflect_dim(quiver, k, alpha)
            key = tuple(new_alpha)
            if key in seen:
                continue
            seen.add(key)
            queue.append((reflect_weight(quiver, k, lam), new_alpha, [*chain, k]))
    return None


def orbit_roots(quiver: Quiver, height: int) -> set[tuple[int, ...]]:
    """Roots of height <= height by ascending reflections from simple roots and F.

    Independent of the descent in classify_root; negatives are included.
    """
    positive = set()
    frontier = []
    for k in quiver.loop_free:
        unit = np.zeros(quiver.size, dtype=int)
        unit[quiver.index(k)] = 1
        frontier.append(unit)
    frontier.extend(
        a for a in lattice_box(quiver, height) if in_fundamental_domain(quiver, a)
    )
    for alpha in frontier:
        positive.add(tuple(int(x) for x in alpha))
    while frontier:
        alpha = frontier.pop()
        for k in quiver.loop_free:
            image = reflect_dim(quiver, k, alpha)
            key = tuple(int(x) for x in image)
            if image.sum() > height or np.any(image < 0) or key in positive:
                continue
            positive.add(key)
            frontier.append(image)
    return positive | {tuple(-x for x in alpha) for alpha in positive}


def variety_dimension(framed: FramedQuiver, alpha: Sequence[int]) -> int:
    """dim M_lambda(alpha, zeta) = 2 p(1, alpha) = 2 zeta . alpha - 2 q(alpha)."""
    _, p = tits_forms(framed.quiver, framed.extended_dim(alpha))
    return 2 * p


def _scan_weight(m: int) -> np.ndarray:
    # generic enough that every reflection met in the scan stays admissible
    return np.array([np.sqrt(2.0) + np.pi * i / 7 for i in range(m)], dtype=complex)


def orbit_scan(m: int, height: int, depth: int = 12) -> pl.DataFrame:
    """Imaginary (1, alpha) over cyclic:m framed at eps_0 reaching some (1, n delta)."""
    framed = framed_cyclic(m, 1)
    quiver = framed.quiver
    lam = _scan_weight(m)

    def reaches_n_delta(_lam, alpha) -> bool:
        return bool(alpha[0] == 1 and np.all(alpha[1:] == alpha[1]))

    rows = []
    for alpha in lattice_box(framed.base, height):
        extended = framed.extended_dim(alpha)
        if classify_root(quiver, extended).kind != RootKind.IMAGINARY:
            continue
        start = (framed.extended_weight(lam, alpha), extended)
        chain = orbit_search(quiver, start, reaches_n_delta, depth)
        final = extended
        for k in chain or []:
            final = reflect_dim(quiver, k, final)
        q, p = tits_forms(quiver, extended)
        rows.append(
            {
                "alpha": ",".join(str(int(a)) for a in alpha),
                "q": q,
                "p": p,
                "reached": chain is not None,
                "n": int(final[1]) if chain is not None else None,
                "chain": ",".join(chain) if chain is not None else None,
            }
        )
    logger.info(f"Orbit scan for {m=}, {height=}: {len(rows)} imaginary roots.")
    return pl.DataFrame(
        rows,
        schema={
            "alpha": pl.String,
            "q": pl.Int64,
            "p": pl.Int64,
            "reached": pl.Boolean,
            "n": pl.Int64,
            "chain": pl.String,
        },
    )
