"""Rational solutions of the matrix KP hierarchies from cyclic quiver points."""

from quiverflow.kp_solutions._dressing import LaxData, build_M, dress, resolvent
from quiverflow.kp_solutions._residuals import (
    EmitFormat,
    EmittedSolution,
    KPGrid,
    NotSphericalError,
    PoleProximityError,
    constraint_residuals,
    dependence_residual,
    emit_u,
    equivariance_residual,
    kp_pde_residual,
    kp_pde_samples,
    lax_halving,
    lax_residual,
    m_equation_residual,
)
from quiverflow.kp_solutions._seed import (
    NonRegularSeedError,
    OffShellError,
    SolutionSeed,
    SphericalFlowError,
    evolve,
    evolve_all,
    flow_weights,
    reducible_extension,
)

__all__ = [
    "EmitFormat",
    "EmittedSolution",
    "KPGrid",
    "LaxData",
    "NonRegularSeedError",
    "NotSphericalError",
    "OffShellError",
    "PoleProximityError",
    "SolutionSeed",
    "SphericalFlowError",
    "build_M",
    "constraint_residuals",
    "dependence_residual",
    "dress",
    "emit_u",
    "equivariance_residual",
    "evolve",
    "evolve_all",
    "flow_weights",
    "kp_pde_residual",
    "kp_pde_samples",
    "lax_halving",
    "lax_residual",
    "m_equation_residual",
    "reducible_extension",
    "resolvent",
]
