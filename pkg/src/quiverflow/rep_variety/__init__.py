"""Representation points of preprojective algebras and invariant functions."""

from quiverflow.rep_variety._point import (
    GaugeElement,
    RepPoint,
    RepShapeError,
    SingularGaugeError,
    collision_point,
    framed_jordan_point,
    gauge_act,
    moment_hamiltonian,
    moment_map,
    random_gauge,
    relation_residual,
    zero_point,
)
from quiverflow.rep_variety._poisson import (
    MomentHamiltonian,
    Observable,
    TracePolynomial,
    hamiltonian_vector_field,
    poisson_bracket,
    theta_commutator,
)
from quiverflow.rep_variety._simple import (
    OffShellPointError,
    generated_algebra_dimension,
    is_simple,
)
from quiverflow.rep_variety._words import (
    TraceWord,
    WordError,
    path_product,
    resolve_letter,
    trace_word,
    word_gradient,
)

__all__ = [
    "GaugeElement",
    "MomentHamiltonian",
    "Observable",
    "OffShellPointError",
    "RepPoint",
    "RepShapeError",
    "SingularGaugeError",
    "TracePolynomial",
    "TraceWord",
    "WordError",
    "collision_point",
    "framed_jordan_point",
    "gauge_act",
    "generated_algebra_dimension",
    "hamiltonian_vector_field",
    "is_simple",
    "moment_hamiltonian",
    "moment_map",
    "path_product",
    "poisson_bracket",
    "random_gauge",
    "relation_residual",
    "resolve_letter",
    "theta_commutator",
    "trace_word",
    "word_gradient",
    "zero_point",
]
