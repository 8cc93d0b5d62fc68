"""Quivers, framings, the bilinear form and root classification."""

from quiverflow.quiver_core._catalog import (
    a_quiver,
    builtin_quiver,
    cyclic_quiver,
    framed_cyclic,
    jordan_quiver,
    quiver_from_dict,
    quiver_to_dict,
)
from quiverflow.quiver_core._quiver import (
    INFINITY,
    DimensionMismatchError,
    Edge,
    FramedQuiver,
    LoopVertexError,
    Quiver,
    QuiverError,
    is_starred,
    star,
)
from quiverflow.quiver_core._roots import (
    RegularityResult,
    RootClass,
    RootPreconditionError,
    SearchResult,
    bilinear_form,
    classify_root,
    in_fundamental_domain,
    is_regular,
    positive_roots,
    reflect_dim,
    reflect_weight,
    rep_existence,
    sigma_lambda_test,
    tits_forms,
)
from quiverflow.quiver_core._search import (
    orbit_roots,
    orbit_scan,
    orbit_search,
    variety_dimension,
)

__all__ = [
    "INFINITY",
    "DimensionMismatchError",
    "Edge",
    "FramedQuiver",
    "LoopVertexError",
    "Quiver",
    "QuiverError",
    "RegularityResult",
    "RootClass",
    "RootPreconditionError",
    "SearchResult",
    "a_quiver",
    "bilinear_form",
    "builtin_quiver",
    "classify_root",
    "cyclic_quiver",
    "framed_cyclic",
    "in_fundamental_domain",
    "is_regular",
    "is_starred",
    "jordan_quiver",
    "orbit_roots",
    "orbit_scan",
    "orbit_search",
    "positive_roots",
    "quiver_from_dict",
    "quiver_to_dict",
    "reflect_dim",
    "reflect_weight",
    "rep_existence",
    "sigma_lambda_test",
    "star",
    "tits_forms",
    "variety_dimension",
]
