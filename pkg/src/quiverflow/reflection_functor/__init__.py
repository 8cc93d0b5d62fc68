"""The reflection functor on points of preprojective representation spaces."""

from quiverflow.reflection_functor._checks import (
    PullbackCheck,
    generating_words,
    involution_check,
    lemma_residuals,
    longest_simple_cycle,
    pullback_expansion,
    symplectic_proxy_check,
    trace_pullback_check,
)
from quiverflow.reflection_functor._functor import (
    ChainResult,
    InadmissibleReflectionError,
    KernelExtractionError,
    KernelMode,
    OffShellError,
    ReflectionResult,
    admissible,
    apply_reflection,
    chain_apply,
)
from quiverflow.reflection_functor._transport import (
    hlr_shift,
    ia_shift,
    transport_constants,
    transport_report,
)

__all__ = [
    "ChainResult",
    "InadmissibleReflectionError",
    "KernelExtractionError",
    "KernelMode",
    "OffShellError",
    "PullbackCheck",
    "ReflectionResult",
    "admissible",
    "apply_reflection",
    "chain_apply",
    "generating_words",
    "hlr_shift",
    "ia_shift",
    "involution_check",
    "lemma_residuals",
    "longest_simple_cycle",
    "pullback_expansion",
    "symplectic_proxy_check",
    "trace_pullback_check",
    "transport_constants",
    "transport_report",
]
