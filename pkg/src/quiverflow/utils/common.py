try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from quiverflow.logger import get_logger

logger = get_logger(__name__)


class TriState(StrEnum):
    """Answer of a bounded search."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"  # enumeration was truncated by its bound


class RootKind(StrEnum):
    """Kac classification of a dimension vector."""

    NOT_ROOT = "not-root"
    REAL = "real"
    IMAGINARY = "imaginary"


class ChartKind(StrEnum):
    """Darboux chart families on cyclic quiver varieties."""

    JORDAN = "jordan"  # m = 1, Calogero-Moser / Gibbons-Hermsen
    EPS0 = "eps0"  # framing d at vertex 0
    DELTA = "delta"  # framing d at every vertex


def root_of_unity(m: int) -> complex:
    """Primitive m-th root of unity exp(2 pi i / m)."""
    return complex(np.exp(2j * np.pi / m))


def as_complex_matrix(value, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Convert to a 2d complex array, optionally checking the shape."""
    matrix = np.asarray(value, dtype=complex)
    if matrix.ndim != 2:
        matrix = matrix.reshape(shape if shape is not None else (1, -1))
    if shape is not None and matrix.shape != shape:
        error_msg = f"Expected a matrix of shape {shape}, got {matrix.shape}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    return matrix
