"""JSON documents for quivers, points, charts, operators and seeds.

Complex numbers are [re, im] pairs, matrices nested lists of pairs and every
document carries a versioned "schema" field.
"""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
import orjson

from quiverflow.config import Window, get_config
from quiverflow.cyclic_systems import CyclicPoint, DarbouxChart
from quiverflow.hamiltonian_dynamics import LZetaElement, QStarPath
from quiverflow.kp_solutions import SolutionSeed
from quiverflow.logger import get_logger
from quiverflow.operator_algebra import (
    CherednikAlgebra,
    CrossedElement,
    HBarElement,
    RationalFunction,
)
from quiverflow.quiver_core import (
    INFINITY,
    FramedQuiver,
    Quiver,
    builtin_quiver,
    quiver_from_dict,
    quiver_to_dict,
)
from quiverflow.rep_variety import RepPoint
from quiverflow.utils.common import ChartKind

logger = get_logger(__name__)

SCHEMA_PREFIX = "quiverflow/"
SCHEMA_VERSION = 1
DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


class SchemaError(ValueError):
    pass


def schema(kind: str) -> str:
    return f"{SCHEMA_PREFIX}{kind}@{SCHEMA_VERSION}"


def fixed_digits(value: float) -> float:
    """Round-trip through 17 significant digits; -0.0 is written as 0.0."""
    value = float(f"{float(value):.17g}")
    return 0.0 if value == 0 else value


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [fixed_digits(z.real), fixed_digits(z.imag)]


def decode_complex(pair) -> complex:
    if isinstance(pair, int | float):
        return complex(pair)
    try:
        re, im = pair
    except (TypeError, ValueError) as e:
        error_msg = f"Expected a [re, im] pair, got {pair!r}."
        logger.error(error_msg)
        raise SchemaError(error_msg) from e
    return complex(float(re), float(im))


def encode_array(array: np.ndarray) -> list:
    array = np.asarray(array, dtype=complex)
    if array.ndim == 0:
        return encode_complex(array.item())
    return [encode_array(row) for row in array]


def decode_array(data, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Inverse of encode_array; shape is needed for empty matrices."""

    def walk(item):
        if isinstance(item, list) and item and isinstance(item[0], list):
            return [walk(entry) for entry in item]
        if isinstance(item, list) and not item:
            return []
        return decode_complex(item)

    array = np.asarray(walk(data), dtype=complex)
    if shape is not None:
        try:
            array = array.reshape(shape)
        except ValueError as e:
            error_msg = f"Array of shape {array.shape} does not fit {shape}."
            logger.error(error_msg)
            raise SchemaError(error_msg) from e
    return array


def document(kind: str, payload: Mapping[str, Any]) -> dict[str, Any]:
    return {"schema": schema(kind), **payload}


def check_schema(data: Mapping[str, Any], kind: str) -> Mapping[str, Any]:
    found = data.get("schema") if isinstance(data, Mapping) else None
    if found != schema(kind):
        error_msg = f"Expected a {schema(kind)!r} document, found schema {found!r}."
        logger.error(error_msg)
        raise SchemaError(error_msg)
    return data


def dumps(doc: Mapping[str, Any]) -> bytes:
    return orjson.dumps(doc, option=DUMP_OPTIONS)


def write_json(path: str | Path, doc: Mapping[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(doc) + b"\n")
    logger.info(f"{doc.get('schema', 'document')} written to {path}")
    return path


def read_json(path: str | Path, kind: str | None = None) -> dict[str, Any]:
    path = Path(path)
    try:
        data = orjson.loads(path.read_bytes())
    except FileNotFoundError as e:
        error_msg = f"Input file {path} does not exist."
        logger.error(error_msg)
        raise SchemaError(error_msg) from e
    except orjson.JSONDecodeError as e:
        error_msg = f"Malformed JSON in {path}: {e}"
        logger.error(error_msg)
        raise SchemaError(error_msg) from e
    if kind is not None:
        check_schema(data, kind)
    return data


def quiver_document(quiver: Quiver) -> dict[str, Any]:
    return document("quiver", quiver_to_dict(quiver.base()))


def resolve_quiver(name_or_path: str) -> Quiver:
    """A built-in name (jordan, cyclic:<m>, A:<n>) or a quiver JSON file."""
    if Path(name_or_path).suffix == ".json":
        data = read_json(name_or_path)
        return quiver_from_dict(data)
    return builtin_quiver(name_or_path)


def framing_to_dict(framed: FramedQuiver) -> dict[str, Any]:
    return {
        "quiver": quiver_to_dict(framed.base),
        "zeta": dict(zip(framed.base.vertices, framed.zeta, strict=True)),
    }


def framing_from_dict(data: Mapping[str, Any]) -> FramedQuiver:
    return FramedQuiver.from_zeta(quiver_from_dict(data["quiver"]), data["zeta"])


def point_to_dict(point: RepPoint) -> dict[str, Any]:
    quiver = point.quiver
    return document(
        "point",
        {
            "quiver": quiver_to_dict(quiver.base()),
            "dims": dict(zip(quiver.vertices, point.dims, strict=True)),
            "mats": {e.id: encode_array(point.mat(e.id)) for e in quiver.edges},
        },
    )


def point_from_dict(data: Mapping[str, Any]) -> RepPoint:
    check_schema(data, "point")
    try:
        quiver = quiver_from_dict(data["quiver"]).double()
        dims = tuple(int(data["dims"][v]) for v in quiver.vertices)
        index = dict(zip(quiver.vertices, dims, strict=True))
        mats = {
            e.id: decode_array(data["mats"][e.id], (index[e.head], index[e.tail]))
            for e in quiver.edges
        }
    except KeyError as e:
        error_msg = f"Point document misses the entry {e}."
        logger.error(error_msg)
        raise SchemaError(error_msg) from e
    return RepPoint(quiver, dims, mats)


def chart_to_dict(chart: DarbouxChart) -> dict[str, Any]:
    return document(
        "chart",
        {
            "kind": str(chart.kind),
            "m": chart.m,
            "x": encode_array(chart.x),
            "p": encode_array(chart.p),
            "phi": encode_array(chart.phi),
            "psi": encode_array(chart.psi),
            "spin_shape": list(chart.phi.shape[1:]),
        },
    )


def chart_from_dict(data: Mapping[str, Any]) -> DarbouxChart:
    check_schema(data, "chart")
    n = len(data["x"])
    x = decode_array(data["x"], (n,))
    p = decode_array(data["p"], (n,))
    d, width = data["spin_shape"]
    phi = decode_array(data["phi"], (n, d, width))
    psi = decode_array(data["psi"], (n, width, d))
    return DarbouxChart(ChartKind(data["kind"]), int(data["m"]), x, p, phi, psi)


def rational_to_dict(f: RationalFunction) -> dict[str, Any]:
    return {
        "poly": encode_array(f.poly),
        "poles": [
            {"at": encode_complex(z), "coefs": encode_array(c)} for z, c in f.poles
        ],
    }


def rational_from_dict(data: Mapping[str, Any]) -> RationalFunction:
    poles = tuple(
        (decode_complex(p["at"]), decode_array(p["coefs"], (-1,)))
        for p in data.get("poles", [])
    )
    return RationalFunction(decode_array(data.get("poly", []), (-1,)), poles)


def hbar_to_dict(F: HBarElement) -> dict[str, Any]:
    alg = F.algebra
    return document(
        "operator",
        {
            "lam": [encode_complex(v) for v in alg.lam],
            "window": {"low": alg.low, "high": alg.high},
            "validity_floor": F.validity_floor,
            "truncated": F.truncated,
            "terms": {
                str(k): [rational_to_dict(p) for p in coef.parts]
                for k, coef in F.terms.items()
            },
        },
    )


def hbar_from_dict(data: Mapping[str, Any]) -> HBarElement:
    check_schema(data, "operator")
    lam = tuple(decode_complex(v) for v in data["lam"])
    algebra = CherednikAlgebra(lam, data["window"]["low"], data["window"]["high"])
    terms = {
        int(k): CrossedElement(tuple(rational_from_dict(p) for p in parts))
        for k, parts in data["terms"].items()
    }
    return HBarElement(
        algebra, terms, data.get("validity_floor"), bool(data.get("truncated"))
    )


def seed_to_dict(seed: SolutionSeed) -> dict[str, Any]:
    return document(
        "seed",
        {
            "lam": [encode_complex(v) for v in seed.lam],
            "window": {"low": seed.window.low, "high": seed.window.high},
            "A": None if seed.A is None else [encode_complex(a) for a in seed.A],
            "allow_reducible": seed.allow_reducible,
            "point": point_to_dict(seed.point.point),
        },
    )


def seed_from_dict(data: Mapping[str, Any]) -> SolutionSeed:
    """A seed from an explicit point or from a Darboux "chart" entry."""
    check_schema(data, "seed")
    lam = tuple(decode_complex(v) for v in data["lam"])
    window = Window(**data["window"]) if "window" in data else get_config().window
    A = data.get("A")
    A = None if A is None else tuple(decode_complex(a) for a in A)
    if "chart" in data:
        return SolutionSeed.from_chart(chart_from_dict(data["chart"]), lam, window, A)
    return SolutionSeed(
        cyclic_point_from_dict(data["point"]),
        lam,
        window,
        A,
        bool(data.get("allow_reducible", False)),
    )


def framed_from_point(point: RepPoint) -> FramedQuiver:
    """The framed quiver a point lives on, zeta read off its b<i>_<r> edges."""
    quiver = point.quiver.base()
    if INFINITY not in quiver.vertices:
        error_msg = f"Point has no framing vertex {INFINITY!r}."
        logger.error(error_msg)
        raise SchemaError(error_msg)
    base = Quiver(
        tuple(v for v in quiver.vertices if v != INFINITY),
        tuple(e for e in quiver.edges if INFINITY not in (e.tail, e.head)),
    )
    widths = {v: 0 for v in base.vertices}
    for edge in quiver.edges:
        if edge.tail == INFINITY:
            widths[edge.head] += 1
    framed = FramedQuiver.from_zeta(base, widths)
    if framed.quiver.double() != point.quiver:
        error_msg = "Point edges do not follow the b<i>_<r> framing convention."
        logger.error(error_msg)
        raise SchemaError(error_msg)
    return framed


def cyclic_point_from_dict(data: Mapping[str, Any]) -> CyclicPoint:
    point = point_from_dict(data)
    return CyclicPoint(framed_from_point(point), point)


def lzeta_to_dict(a: LZetaElement) -> dict[str, Any]:
    return document(
        "lzeta",
        {
            "framing": framing_to_dict(a.framed),
            "cap": a.cap,
            "components": [
                {
                    "vertices": list(path.vertices),
                    "letters": list(path.letters),
                    "matrix": encode_array(matrix),
                }
                for path, matrix in a.components.items()
            ],
        },
    )


def lzeta_from_dict(data: Mapping[str, Any]) -> LZetaElement:
    """An element of L_zeta: one matrix per Q*-path, given by its letters."""
    check_schema(data, "lzeta")
    framed = framing_from_dict(data["framing"])
    element = LZetaElement(framed, {}, data.get("cap"))
    components = {}
    for entry in data["components"]:
        letters = tuple(entry.get("letters", ()))
        source = entry["vertices"][0] if entry.get("vertices") else None
        path = QStarPath.from_letters(framed.base, letters, source)
        components[path] = decode_array(entry["matrix"], element.shape(path))
    return LZetaElement(framed, components, element.cap)
