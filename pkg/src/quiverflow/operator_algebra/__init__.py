"""Truncated operator arithmetic in the localized Cherednik algebra of Z/m."""

from quiverflow.operator_algebra._crossed import (
    CrossedElement,
    crossed_mul,
    weight_coefficients,
)
from quiverflow.operator_algebra._hbar import (
    CherednikAlgebra,
    HBarElement,
    NotUnitriangularError,
    WindowError,
    binomial,
    check_unitriangular,
    coefficient_gap,
    dunkl,
    hbar_mul,
    split_pm,
)
from quiverflow.operator_algebra._matrix import (
    MatrixOperator,
    commutator,
    invert_unitriangular,
    matrix_gap,
    matrix_mul,
    split_pm_matrix,
)
from quiverflow.operator_algebra._rational import (
    DegreeCapError,
    RationalFunction,
    ZeroDivisionRationalError,
    combine,
    rf_arith,
    sample_points,
)


def comm_y(f, lam) -> CrossedElement:
    """[y, f(x)] in the algebra with parameter lambda."""
    return CherednikAlgebra.from_config(lam).comm_y(f)


__all__ = [
    "CherednikAlgebra",
    "CrossedElement",
    "DegreeCapError",
    "HBarElement",
    "MatrixOperator",
    "NotUnitriangularError",
    "RationalFunction",
    "WindowError",
    "ZeroDivisionRationalError",
    "binomial",
    "check_unitriangular",
    "coefficient_gap",
    "combine",
    "comm_y",
    "commutator",
    "crossed_mul",
    "dunkl",
    "hbar_mul",
    "invert_unitriangular",
    "matrix_gap",
    "matrix_mul",
    "rf_arith",
    "sample_points",
    "split_pm",
    "split_pm_matrix",
    "weight_coefficients",
]
