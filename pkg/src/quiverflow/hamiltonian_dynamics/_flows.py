"""Flows of H_p and of the integrals I_A.

The flow of H_p translates the unstarred matrices along a constant
bracket. Along the flow of I_A the starred matrices stay fixed, so v and
w solve linear equations with constant coefficients and are given by matrix
exponentials; the remaining V_a are integrals of entire functions of t.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
import polars as pl
import scipy.integrate
import scipy.linalg

from quiverflow.hamiltonian_dynamics._hamiltonians import (
    framing_maps,
    framing_updates,
    ia_observable,
)
from quiverflow.hamiltonian_dynamics._lzeta import LZetaElement
from quiverflow.hamiltonian_dynamics._paths import QStarPath
from quiverflow.logger import get_logger
from quiverflow.quiver_core import INFINITY, star
from quiverflow.rep_variety import (
    Observable,
    RepPoint,
    TracePolynomial,
    hamiltonian_vector_field,
    path_product,
    relation_residual,
)

logger = get_logger(__name__)

QUADRATURE_TOL = 1e-10


class StepUnderflowError(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    """Samples of a flow; times move monotonically away from t = 0."""

    times: np.ndarray
    points: tuple[RepPoint, ...] = field(repr=False)
    conserved: pl.DataFrame = field(repr=False)

    def __post_init__(self):
        if len(self.times) != len(self.points):
            error_msg = f"{len(self.times)} times for {len(self.points)} points."
            logger.error(error_msg)
            raise ValueError(error_msg)
        if np.any(np.diff(np.abs(self.times)) <= 0):
            error_msg = "Trajectory time stamps must be strictly ordered."
            logger.error(error_msg)
            raise ValueError(error_msg)

    @property
    def final(self) -> RepPoint:
        return self.points[-1]


def flow_exact_Hp(point: RepPoint, path: QStarPath, t: complex) -> RepPoint:
    """V(t) = V(0) + t {H_p, V}, exact since the bracket is constant."""
    observable = TracePolynomial.word(path.trace_word(point.quiver))
    velocity = hamiltonian_vector_field(point, observable)
    return point.with_mats({a: point.mat(a) + t * dv for a, dv in velocity.items()})


def _framing_generators(
    point: RepPoint, a: LZetaElement
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Constant matrices Omega_w, Omega_v acting on the row-major w_i and v_i.

    dw_i/dt = -sum_{p: i -> j} A_p w_j V_p,  dv_j/dt = sum_{p: i -> j} V_p v_i A_p.
    """
    framed = a.framed
    vertices = list(framed.base.vertices)
    sizes = {
        i: point.dim(i) * framed.zeta[framed.base.index(i)] for i in vertices
    }
    offsets, start = {}, 0
    for i in vertices:
        offsets[i] = slice(start, start + sizes[i])
        start += sizes[i]
    omega_w = np.zeros((start, start), dtype=complex)
    omega_v = np.zeros((start, start), dtype=complex)
    for path, matrix in a.components.items():
        i, j = path.source, path.target
        V_p = path_product(point, path.letters, i)
        omega_w[offsets[i], offsets[j]] -= np.kron(matrix, V_p.T)
        omega_v[offsets[j], offsets[i]] += np.kron(V_p, matrix.T)
    return omega_w, omega_v, vertices


def _pack(mats: dict[str, np.ndarray], vertices: list[str]) -> np.ndarray:
    if not vertices:
        return np.zeros(0, dtype=complex)
    return np.concatenate([mats[i].reshape(-1) for i in vertices])


def _unpack(
    vector: np.ndarray, like: dict[str, np.ndarray], vertices: list[str]
) -> dict[str, np.ndarray]:
    mats, start = {}, 0
    for i in vertices:
        size = like[i].size
        mats[i] = vector[start : start + size].reshape(like[i].shape)
        start += size
    return mats


def flow_IA(
    point: RepPoint,
    a: LZetaElement,
    t: float,
    steps: int = 16,
    lam=None,
    monitors: Mapping[str, Observable] | None = None,
) -> Trajectory:
    """Integrate the Hamiltonian flow of I_A up to time t.

    The log holds, per sample, the relation residual (when lam is given) and
    the drift of I_A and of every monitored observable.
    """
    if steps < 1:
        error_msg = f"Expected steps >= 1, got {steps}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    if t != 0 and abs(t) / steps < 1e-14 * max(1.0, abs(t)):
        error_msg = f"Step size {abs(t) / steps:.3e} underflows."
        logger.error(error_msg)
        raise StepUnderflowError(error_msg)
    if point.dim(INFINITY) != 1:
        error_msg = "Flows of I_A are defined for alpha_inf = 1."
        logger.error(error_msg)
        raise ValueError(error_msg)

    framed = a.framed
    observable = ia_observable(a)
    monitors = {"I_A": observable, **(monitors or {})}
    v0, w0 = framing_maps(point, framed)
    omega_w, omega_v, vertices = _framing_generators(point, a)
    w0_vec, v0_vec = _pack(w0, vertices), _pack(v0, vertices)
    flowing = [e.id for e in framed.base.edges]

    def framing_at(s: float) -> dict[str, np.ndarray]:
        w = _unpack(scipy.linalg.expm(s * omega_w) @ w0_vec, w0, vertices)
        v = _unpack(scipy.linalg.expm(s * omega_v) @ v0_vec, v0, vertices)
        return framing_updates(framed, v, w)

    def velocity(s: float) -> np.ndarray:
        gradient = observable.gradient(point.with_mats(framing_at(s)))
        parts = []
        for e in flowing:
            g = gradient.get(star(e), np.zeros_like(point.mat(e)))
            parts.append(-g.reshape(-1))
        flat = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
        return np.concatenate([flat.real, flat.imag])

    times = np.linspace(0.0, float(t), steps + 1) if t != 0 else np.zeros(1)
    initial = {name: obs.value(point) for name, obs in monitors.items()}
    points, rows = [point], []
    current = {e: point.mat(e) for e in flowing}

    def log(s: float, state: RepPoint) -> None:
        row = {"t": s}
        if lam is not None:
            row["residual"] = relation_residual(state, lam)
        for name, obs in monitors.items():
            row[f"{name}_drift"] = abs(obs.value(state) - initial[name])
        rows.append(row)

    log(0.0, point)
    for start, stop in zip(times[:-1], times[1:], strict=True):
        if not flowing:
            state = point.with_mats(framing_at(stop))
            points.append(state)
            log(float(stop), state)
            continue
        increment, _, info = scipy.integrate.quad_vec(
            velocity,
            start,
            stop,
            epsabs=QUADRATURE_TOL,
            epsrel=QUADRATURE_TOL,
            full_output=True,
        )
        if not info.success:
            error_msg = f"Quadrature on [{start}, {stop}] failed: {info.message}"
            logger.error(error_msg)
            raise StepUnderflowError(error_msg)
        half = increment.size // 2
        delta = increment[:half] + 1j * increment[half:]
        offset = 0
        for e in flowing:
            size = current[e].size
            current[e] = current[e] + delta[offset : offset + size].reshape(
                current[e].shape
            )
            offset += size
        state = point.with_mats({**current, **framing_at(stop)})
        points.append(state)
        log(float(stop), state)
    logger.info(f"Integrated I_A flow to t={t} in {steps} steps.")
    return Trajectory(times, tuple(points), pl.DataFrame(rows))
