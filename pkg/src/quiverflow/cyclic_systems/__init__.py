"""Cyclic quiver varieties: block form, Darboux charts and spin systems."""

from quiverflow.cyclic_systems._charts import (
    ChartBoundaryError,
    ChartKindError,
    DarbouxChart,
    chart_dimension,
    darboux_tangents,
    free_spin_indices,
    from_darboux,
    infer_kind,
    to_darboux,
)
from quiverflow.cyclic_systems._checks import (
    PoleInputError,
    RankResult,
    chart_dimension_audit,
    embed_eps0_in_delta,
    eps0_locus_drift,
    independence_rank,
    partial_fraction_identity,
    symplectic_form_residual,
)
from quiverflow.cyclic_systems._hamiltonians import (
    CrossCheckError,
    exact_flow_mk,
    hamiltonian_Hlr_cyclic,
    hamiltonian_Hmk,
    hlr_words,
    hmk_from_framing,
    j_element,
    j_ell,
    y_product,
)
from quiverflow.cyclic_systems._point import BlockLift, CyclicPoint

__all__ = [
    "BlockLift",
    "ChartBoundaryError",
    "ChartKindError",
    "CrossCheckError",
    "CyclicPoint",
    "DarbouxChart",
    "PoleInputError",
    "RankResult",
    "chart_dimension",
    "chart_dimension_audit",
    "darboux_tangents",
    "embed_eps0_in_delta",
    "eps0_locus_drift",
    "exact_flow_mk",
    "free_spin_indices",
    "from_darboux",
    "hamiltonian_Hlr_cyclic",
    "hamiltonian_Hmk",
    "hlr_words",
    "hmk_from_framing",
    "independence_rank",
    "infer_kind",
    "j_element",
    "j_ell",
    "partial_fraction_identity",
    "symplectic_form_residual",
    "to_darboux",
    "y_product",
]
