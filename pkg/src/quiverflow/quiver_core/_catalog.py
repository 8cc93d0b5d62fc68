from quiverflow.logger import get_logger
from quiverflow.quiver_core._quiver import Edge, FramedQuiver, Quiver, QuiverError

logger = get_logger(__name__)


def cyclic_quiver(m: int) -> Quiver:
    """Oriented cycle x_i: i -> i+1 mod m; m = 1 is the Jordan quiver."""
    if m < 1:
        error_msg = f"Cyclic quiver needs m >= 1, got {m=}."
        logger.error(error_msg)
        raise QuiverError(error_msg)
    vertices = tuple(str(i) for i in range(m))
    edges = tuple(Edge(f"x{i}", str(i), str((i + 1) % m)) for i in range(m))
    return Quiver(vertices, edges)


def jordan_quiver() -> Quiver:
    return cyclic_quiver(1)


def a_quiver(n: int) -> Quiver:
    """Linear A_n quiver a_i: i -> i+1."""
    if n < 1:
        error_msg = f"A_n quiver needs n >= 1, got {n=}."
        logger.error(error_msg)
        raise QuiverError(error_msg)
    vertices = tuple(str(i) for i in range(n))
    edges = tuple(Edge(f"a{i}", str(i), str(i + 1)) for i in range(n - 1))
    return Quiver(vertices, edges)


def builtin_quiver(name: str) -> Quiver:
    """Resolve `jordan`, `cyclic:<m>` or `A:<n>`."""
    family, _, arg = name.partition(":")
    try:
        if family == "jordan" and not arg:
            return jordan_quiver()
        if family == "cyclic":
            return cyclic_quiver(int(arg))
        if family == "A":
            return a_quiver(int(arg))
    except ValueError as e:
        error_msg = f"Invalid size in quiver name {name!r}."
        logger.error(error_msg)
        raise QuiverError(error_msg) from e
    error_msg = f"Unknown quiver {name!r}. Expected jordan, cyclic:<m> or A:<n>."
    logger.error(error_msg)
    raise QuiverError(error_msg)


def framed_cyclic(m: int, zeta: tuple[int, ...] | int) -> FramedQuiver:
    """Cyclic quiver framed by zeta; an int d means d * eps_0."""
    base = cyclic_quiver(m)
    if isinstance(zeta, int):
        zeta = (zeta,) + (0,) * (m - 1)
    return FramedQuiver(base, tuple(zeta))


def quiver_from_dict(data: dict) -> Quiver:
    """Parse {"vertices": [...], "edges": [{"id", "tail", "head"}, ...]}."""
    try:
        vertices = tuple(str(v) for v in data["vertices"])
        edges = tuple(
            Edge(str(e["id"]), str(e["tail"]), str(e["head"])) for e in data["edges"]
        )
    except (KeyError, TypeError) as e:
        error_msg = f"Malformed quiver description: {e}."
        logger.error(error_msg)
        raise QuiverError(error_msg) from e
    return Quiver(vertices, edges)


def quiver_to_dict(quiver: Quiver) -> dict:
    return {
        "vertices": list(quiver.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in quiver.edges],
    }
