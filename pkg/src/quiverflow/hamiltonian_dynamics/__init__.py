"""Hamiltonians H_p, integrals I_A, the Lie algebra L_zeta and their flows."""

from quiverflow.hamiltonian_dynamics._flows import (
    StepUnderflowError,
    Trajectory,
    flow_exact_Hp,
    flow_IA,
)
from quiverflow.hamiltonian_dynamics._hamiltonians import (
    cycle_sum,
    framing_maps,
    framing_updates,
    hamiltonian_Hlr,
    hamiltonian_Hp,
    hlr_element,
    hlr_observable,
    hp_word,
    ia_observable,
    integral_IA,
)
from quiverflow.hamiltonian_dynamics._lzeta import (
    LZetaElement,
    PathCapError,
    default_path_cap,
    lzeta_bracket,
    unit_matrix,
)
from quiverflow.hamiltonian_dynamics._paths import (
    PathSet,
    QStarPath,
    all_q_star_paths,
    has_q_star_cycle,
    q_star_cycles,
    q_star_graph,
    q_star_paths,
)

__all__ = [
    "LZetaElement",
    "PathCapError",
    "PathSet",
    "QStarPath",
    "StepUnderflowError",
    "Trajectory",
    "all_q_star_paths",
    "cycle_sum",
    "default_path_cap",
    "flow_IA",
    "flow_exact_Hp",
    "framing_maps",
    "framing_updates",
    "hamiltonian_Hlr",
    "hamiltonian_Hp",
    "has_q_star_cycle",
    "hlr_element",
    "hlr_observable",
    "hp_word",
    "ia_observable",
    "integral_IA",
    "lzeta_bracket",
    "q_star_cycles",
    "q_star_graph",
    "q_star_paths",
    "unit_matrix",
]
