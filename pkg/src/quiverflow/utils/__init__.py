from quiverflow.utils.common import (
    ChartKind,
    RootKind,
    TriState,
    as_complex_matrix,
    root_of_unity,
)
from quiverflow.utils.linalg import (
    commutator,
    matrix_power_product,
    numeric_rank,
    op_norm,
    range_basis,
)

__all__ = [
    "ChartKind",
    "RootKind",
    "TriState",
    "as_complex_matrix",
    "commutator",
    "matrix_power_product",
    "numeric_rank",
    "op_norm",
    "range_basis",
    "root_of_unity",
]
