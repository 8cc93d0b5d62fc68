"""CLI for quiverflow."""

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, Literal

import numpy as np
import polars as pl
from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console
from rich.table import Table
from rich.text import Text

import quiverflow
from quiverflow.config import QuiverflowConfig, Tolerances, Window, get_config
from quiverflow.cyclic_systems import (
    DarbouxChart,
    from_darboux,
    independence_rank,
    to_darboux,
)
from quiverflow.hamiltonian_dynamics import (
    QStarPath,
    flow_exact_Hp,
    flow_IA,
    hlr_element,
)
from quiverflow.kp_solutions import (
    KPGrid,
    emit_u,
    kp_pde_residual,
    kp_pde_samples,
    lax_residual,
)
from quiverflow.logger import get_logger
from quiverflow.operator_algebra import CherednikAlgebra, hbar_mul
from quiverflow.quiver_core import (
    classify_root,
    is_regular,
    orbit_scan,
    rep_existence,
    sigma_lambda_test,
    tits_forms,
)
from quiverflow.rep_variety import (
    RepPoint,
    TracePolynomial,
    TraceWord,
    is_simple,
    poisson_bracket,
    relation_residual,
)
from quiverflow.reflection_functor import apply_reflection, chain_apply
from quiverflow.utils.common import ChartKind
from quiverflow.utils.json_io import (
    chart_from_dict,
    chart_to_dict,
    cyclic_point_from_dict,
    document,
    encode_array,
    encode_complex,
    fixed_digits,
    framed_from_point,
    hbar_from_dict,
    hbar_to_dict,
    lzeta_from_dict,
    point_from_dict,
    point_to_dict,
    read_json,
    resolve_quiver,
    seed_from_dict,
    write_json,
)
from quiverflow.verify import CheckResult, VerifyReport, associativity_gap, run_suites

logger = get_logger(__name__)
console = Console()

OutputFormat = Literal["table", "json", "csv", "rational"]

# options whose values may start with a minus sign
NUMERIC_OPTIONS = frozenset({"--weight", "--window", "--t", "--x", "--dim"})
INPUT_OPTIONS = ("point", "coords", "seed_file", "left", "right")


def int_list(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(","))


def complex_list(text: str) -> tuple[complex, ...]:
    return tuple(complex(s.strip().replace(" ", "")) for s in text.split(","))


def window_pair(text: str) -> Window:
    low, high = int_list(text)
    return Window(low=low, high=high)


class RunConfig(BaseModel):
    """One CLI invocation: the parsed arguments on top of the configuration."""

    model_config = ConfigDict(extra="forbid")
    command: str
    action: str | None = None
    inputs: dict[str, Path] = Field(default_factory=dict)
    options: dict[str, Any] = Field(default_factory=dict)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    window: Window = Field(default_factory=Window)
    seed: int = 42
    output: Path | None = None
    format: OutputFormat = "table"

    @classmethod
    def from_args(
        cls, args: argparse.Namespace, config: QuiverflowConfig | None = None
    ) -> "RunConfig":
        config = get_config() if config is None else config
        values = dict(vars(args))
        inputs = {}
        for key in INPUT_OPTIONS:
            path = values.pop(key, None)
            if path is not None:
                inputs[key] = Path(path)
        seed = values.pop("rng_seed", None)
        window = values.pop("window", None)
        return cls(
            command=values.pop("command"),
            action=values.pop("action", None),
            inputs=inputs,
            tolerances=config.tolerances,
            window=config.window if window is None else window,
            seed=config.seed if seed is None else seed,
            output=values.pop("output", None),
            format=values.pop("format", None) or "table",
            options=values,
        )

    def input(self, key: str) -> Path:
        if key not in self.inputs:
            error_msg = f"Command {self.command} needs an input file for {key!r}."
            logger.error(error_msg)
            raise ValueError(error_msg)
        return self.inputs[key]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, complex | np.complexfloating):
        if value.imag == 0:
            return f"{value.real:.10g}"
        return f"{value.real:.10g}{value.imag:+.10g}j"
    if isinstance(value, float | np.floating):
        return f"{value:.3e}"
    return str(value)


def _print_table(title: str, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    table = Table(title=Text(title))
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(Text(_fmt(value)) for value in row))
    console.print(table)


def _write(config: RunConfig, doc: dict[str, Any]) -> None:
    if config.output is None:
        return
    write_json(config.output, doc)
    console.print(f"Wrote {config.output.as_posix()}", markup=False)


def _read_point(config: RunConfig) -> RepPoint:
    return point_from_dict(read_json(config.input("point"), "point"))


def _point_weight(point: RepPoint, values: Sequence[complex]) -> np.ndarray:
    """A full weight, or a base weight extended to the framing vertex."""
    if len(values) == point.quiver.size:
        return np.asarray(values, dtype=complex)
    framed = framed_from_point(point)
    if len(values) == framed.base.size:
        return framed.extended_weight(values, point.dims[1:])
    error_msg = (
        f"Expected {point.quiver.size} or {framed.base.size} weights, "
        f"got {len(values)}."
    )
    logger.error(error_msg)
    raise ValueError(error_msg)


def _residual_bound(config: RunConfig, point: RepPoint) -> float:
    return config.tolerances.residual * max(1.0, point.scale()) ** 2


def _roots_classify(config: RunConfig) -> int:
    quiver = resolve_quiver(config.options["quiver"])
    alpha = config.options["dim"]
    root = classify_root(quiver, alpha)
    q, p = tits_forms(quiver, alpha)
    chain = ",".join(root.chain) or "-"
    _print_table(
        f"{config.options['quiver']} at {alpha}",
        ["class", "q", "p", "chain"],
        [[str(root), q, p, chain]],
    )
    payload = {
        "quiver": config.options["quiver"],
        "dim": list(alpha),
        "class": str(root),
        "q": int(q),
        "p": int(p),
        "chain": list(root.chain),
        "reduced": list(root.reduced),
    }
    _write(config, document("roots", payload))
    return 0


def _roots_regular(config: RunConfig) -> int:
    quiver = resolve_quiver(config.options["quiver"])
    lam = config.options["weight"]
    result = is_regular(quiver, lam, config.options["bound"])
    witness = "-" if result.witness is None else ",".join(map(str, result.witness))
    _print_table(
        f"regularity on {config.options['quiver']}",
        ["regular", "exact", "witness", "bound"],
        [[result.regular, result.exact, witness, result.bound or "-"]],
    )
    payload = {
        "quiver": config.options["quiver"],
        "weight": [encode_complex(v) for v in lam],
        "regular": bool(result.regular),
        "exact": bool(result.exact),
        "witness": None if result.witness is None else list(result.witness),
        "bound": result.bound,
    }
    _write(config, document("regularity", payload))
    return 0


def _roots_exists(config: RunConfig) -> int:
    quiver = resolve_quiver(config.options["quiver"])
    lam, alpha = config.options["weight"], config.options["dim"]
    rows, payload = [], {}
    for name, test in [("R+(lam)", rep_existence), ("Sigma(lam)", sigma_lambda_test)]:
        result = test(quiver, lam, alpha, config.options["bound"])
        witness = " + ".join(",".join(map(str, part)) for part in result.witness)
        rows.append([name, str(result.state), witness or "-", result.explored])
        payload[name] = {
            "state": str(result.state),
            "witness": [list(part) for part in result.witness],
            "bound": result.bound,
            "explored": result.explored,
        }
    _print_table(
        f"{config.options['quiver']} at {alpha}",
        ["test", "answer", "witness", "explored"],
        rows,
    )
    _write(config, document("existence", payload))
    return 0


def _roots_orbit_scan(config: RunConfig) -> int:
    options = config.options
    frame = orbit_scan(options["m"], options["height"], options["depth"])
    if config.format == "csv":
        if config.output is None:
            print(frame.write_csv(), end="")
        else:
            frame.write_csv(config.output)
            console.print(f"Wrote {config.output.as_posix()}", markup=False)
        return 0
    _print_table(
        f"orbit scan m={options['m']} height<={options['height']}",
        frame.columns,
        frame.rows(),
    )
    return 0


def _rep_verify(config: RunConfig) -> int:
    point = _read_point(config)
    lam = _point_weight(point, config.options["weight"])
    residual = relation_residual(point, lam)
    bound = _residual_bound(config, point)
    passed = bool(residual <= bound)
    _print_table(
        "moment map relation",
        ["residual", "bound", "passed"],
        [[residual, bound, passed]],
    )
    payload = {
        "residual": fixed_digits(residual),
        "bound": fixed_digits(bound),
        "passed": passed,
    }
    _write(config, document("check", payload))
    return 0 if passed else 1


def _rep_simple(config: RunConfig) -> int:
    point = _read_point(config)
    simple = bool(is_simple(point, config.tolerances.simple_rank))
    console.print(f"dims {point.dims}: simple={simple}", markup=False)
    payload = {"dims": [int(d) for d in point.dims], "simple": simple}
    _write(config, document("check", payload))
    return 0


def _rep_bracket(config: RunConfig) -> int:
    point = _read_point(config)
    f = TracePolynomial.word(TraceWord.parse(point.quiver, config.options["f"]))
    g = TracePolynomial.word(TraceWord.parse(point.quiver, config.options["g"]))
    value = poisson_bracket(point, f, g)
    console.print(f"{{f, g}} = {_fmt(complex(value))}", markup=False)
    _write(config, document("bracket", {"value": encode_complex(value)}))
    return 0


def _reflect(config: RunConfig) -> int:
    point = _read_point(config)
    lam = _point_weight(point, config.options["weight"])
    mode = config.options["mode"]
    if config.action == "chain":
        chain = tuple(s.strip() for s in (config.options["chain"] or "").split(","))
        if chain == ("",):
            error_msg = "reflect chain needs --chain, e.g. inf,0,inf."
            logger.error(error_msg)
            raise ValueError(error_msg)
        result = chain_apply(point, chain, lam, mode, framed_from_point(point))
        rows = [
            [step.vertex, ",".join(map(str, step.dims)), step.conditioning]
            for step in result.steps
        ]
        transport = [
            {name: encode_complex(value) for name, value in constants.items()}
            for constants in result.transport
        ]
    else:
        if config.options["vertex"] is None:
            error_msg = "reflect needs --vertex."
            logger.error(error_msg)
            raise ValueError(error_msg)
        result = apply_reflection(point, config.options["vertex"], lam, mode)
        rows = [[result.vertex, ",".join(map(str, result.dims)), result.conditioning]]
        transport = []
    _print_table("reflections", ["vertex", "dims", "conditioning"], rows)
    new_residual = relation_residual(result.point, result.weight)
    console.print(f"relation residual {new_residual:.3e}", markup=False)
    doc = point_to_dict(result.point)
    doc["weight"] = [encode_complex(v) for v in result.weight]
    doc["transport"] = transport
    _write(config, doc)
    return 0


def _flow(config: RunConfig) -> int:
    point = _read_point(config)
    options = config.options
    weight = options["weight"]
    lam = None if weight is None else _point_weight(point, weight)
    family, _, argument = options["hamiltonian"].partition(":")
    t = options["t"]
    if family == "Hp":
        letters = tuple(s.strip() for s in argument.split(",") if s.strip())
        path = QStarPath.from_letters(point.quiver, letters)
        final = flow_exact_Hp(point, path, t)
        row = {"t": t}
        if lam is not None:
            row["residual"] = relation_residual(final, lam)
        log = pl.DataFrame([row])
    elif family in ("Hlr", "IA"):
        if family == "Hlr":
            ell, r = int_list(argument)
            element = hlr_element(framed_from_point(point), ell, r)
        else:
            element = lzeta_from_dict(read_json(argument, "lzeta"))
        trajectory = flow_IA(point, element, t, options["steps"], lam)
        final, log = trajectory.final, trajectory.conserved
    else:
        error_msg = (
            f"Unknown Hamiltonian {options['hamiltonian']!r}. "
            "Expected Hp:<letters>, Hlr:<l>,<r> or IA:<file>."
        )
        logger.error(error_msg)
        raise ValueError(error_msg)
    if options["log"] is not None:
        log.write_csv(options["log"])
        console.print(f"Wrote {Path(options['log']).as_posix()}", markup=False)
    last = log.tail(1).row(0, named=True)
    _print_table(
        f"flow of {options['hamiltonian']}",
        list(last),
        [list(last.values())],
    )
    _write(config, point_to_dict(final))
    return 0


def _cm_build(config: RunConfig) -> int:
    options = config.options
    lam = options["weight"]
    if "coords" in config.inputs:
        chart = chart_from_dict(read_json(config.input("coords"), "chart"))
    else:
        default = "jordan" if options["m"] == 1 else "eps0"
        kind = ChartKind(options["zeta"] or default)
        chart = DarbouxChart.random(
            kind, options["n"], options["m"], options["d"], lam, config.rng()
        )
    cp = from_darboux(chart, lam)
    residual = cp.relation_residual(lam)
    console.print(
        f"{chart.kind} chart n={chart.n} m={chart.m} d={chart.d}: "
        f"relation residual {residual:.3e}",
        markup=False,
    )
    _write(config, point_to_dict(cp.point))
    return 0


def _cm_extract(config: RunConfig) -> int:
    cp = cyclic_point_from_dict(read_json(config.input("point"), "point"))
    chart = to_darboux(cp, config.options["weight"])
    _print_table(
        f"{chart.kind} chart",
        ["a", "x", "p"],
        [
            [a, complex(x), complex(p)]
            for a, (x, p) in enumerate(zip(chart.x, chart.p, strict=True))
        ],
    )
    _write(config, chart_to_dict(chart))
    return 0


def _cm_rank(config: RunConfig) -> int:
    cp = cyclic_point_from_dict(read_json(config.input("point"), "point"))
    lam = config.options["weight"]
    chart = to_darboux(cp, lam)
    result = independence_rank(chart, lam, config.options["family"])
    _print_table(
        f"independence of {config.options['family']}",
        ["rank", "gap"],
        [[result.rank, result.gap]],
    )
    payload = {
        "family": config.options["family"],
        "rank": int(result.rank),
        "sigma": [fixed_digits(s) for s in result.sigma],
    }
    _write(config, document("rank", payload))
    return 0


def _op_mul(config: RunConfig) -> int:
    left = hbar_from_dict(read_json(config.input("left"), "operator"))
    right = hbar_from_dict(read_json(config.input("right"), "operator"))
    product = hbar_mul(left, right)
    console.print(
        f"orders {sorted(product.terms)}, truncated={product.truncated}",
        markup=False,
    )
    _write(config, hbar_to_dict(product))
    return 0


def _op_check_assoc(config: RunConfig) -> int:
    lam = config.options["weight"]
    algebra = CherednikAlgebra(lam, config.window.low, config.window.high)
    rng = config.rng()
    gap = max(associativity_gap(algebra, rng) for _ in range(config.options["samples"]))
    item = CheckResult.at_most("operators", f"associativity m={len(lam)}", gap, 1e-9)
    return _finish_report(config, VerifyReport(config.seed, False, [item]))


def _kp_emit(config: RunConfig) -> int:
    seed = seed_from_dict(read_json(config.input("seed_file"), "seed"))
    solution = emit_u(seed, config.options["t"], rng=config.rng())
    if config.format == "csv":
        x = config.options["x"] or tuple(np.linspace(-3.0, 3.0, 13))
        frame = pl.DataFrame(solution.csv_rows(x))
        if config.output is None:
            print(frame.write_csv(), end="")
        else:
            frame.write_csv(config.output)
            console.print(f"Wrote {config.output.as_posix()}", markup=False)
        return 0
    if solution.poles is None:
        console.print(
            f"L coefficients at orders {sorted(solution.coefficients)}", markup=False
        )
    else:
        console.print(solution.expression, markup=False, soft_wrap=True)
    payload = {
        "times": [encode_complex(t) for t in solution.times],
        "expression": solution.expression,
        "poles": None if solution.poles is None else encode_array(solution.poles),
        "cross_check": (
            None if solution.cross_check is None else fixed_digits(solution.cross_check)
        ),
    }
    _write(config, document("solution", payload))
    return 0


def _kp_verify(config: RunConfig) -> int:
    options = config.options
    seed = seed_from_dict(read_json(config.input("seed_file"), "seed"))
    if options["window_set"]:
        seed = seed.with_window(config.window.low, config.window.high)
    rng = config.rng()
    items = []
    for ell in options["flows"]:
        value = lax_residual(seed, ell, h=options["h"], rng=rng, exclusion=1.0)
        items.append(CheckResult.at_most("kp", f"lax l={ell}", value, options["bound"]))
    if seed.m == 1 and seed.d == 1 and seed.A is None:
        grid = KPGrid.around(seed)
        items.append(
            CheckResult.at_most("kp", "kp equation", kp_pde_residual(seed, grid), 1e-8)
        )
        if options["samples"] is not None:
            kp_pde_samples(seed, grid).write_csv(options["samples"])
            console.print(
                f"Wrote {Path(options['samples']).as_posix()}", markup=False
            )
    report = VerifyReport(seed=config.seed, quick=False, items=items)
    return _finish_report(config, report, options["report"])


def _finish_report(
    config: RunConfig, report: VerifyReport, path: str | Path | None = None
) -> int:
    _print_table(
        "checks",
        ["suite", "check", "value", "bound", "passed"],
        [
            [
                item.suite,
                item.check,
                item.value,
                item.bound,
                "skipped" if item.skipped else item.passed,
            ]
            for item in report.items
        ],
    )
    failures, skipped = len(report.failures), len(report.skipped)
    style = "bold green" if report.passed else "bold red"
    summary = f"{len(report.items) - failures - skipped} passed, {failures} failed"
    if skipped:
        summary += f", {skipped} skipped"
    console.print(summary, style=style)
    path = config.output if path is None else Path(path)
    if path is not None:
        write_json(path, report.to_document())
        console.print(f"Wrote {path.as_posix()}", markup=False)
    return 0 if report.passed else 1


def _verify(config: RunConfig) -> int:
    options = config.options
    names = options["suites"]
    names = None if not names or names == ["all"] else names
    report = run_suites(config.seed, names, options["quick"], options["threads"])
    return _finish_report(config, report, options["report"])


HANDLERS: dict[tuple[str, str | None], Callable[[RunConfig], int]] = {
    ("roots", "classify"): _roots_classify,
    ("roots", "regular"): _roots_regular,
    ("roots", "exists"): _roots_exists,
    ("roots", "orbit-scan"): _roots_orbit_scan,
    ("rep", "verify"): _rep_verify,
    ("rep", "simple"): _rep_simple,
    ("rep", "bracket"): _rep_bracket,
    ("reflect", "apply"): _reflect,
    ("reflect", "chain"): _reflect,
    ("flow", None): _flow,
    ("cm", "build"): _cm_build,
    ("cm", "extract"): _cm_extract,
    ("cm", "rank"): _cm_rank,
    ("op", "mul"): _op_mul,
    ("op", "check-assoc"): _op_check_assoc,
    ("kp", "emit"): _kp_emit,
    ("kp", "verify"): _kp_verify,
    ("verify", None): _verify,
}


def dispatch(config: RunConfig) -> int:
    """Route a parsed invocation to its handler and return the exit status."""
    handler = HANDLERS.get((config.command, config.action))
    if handler is None:
        error_msg = f"Unknown command {config.command} {config.action or ''}".strip()
        logger.error(error_msg)
        raise ValueError(error_msg)
    logger.debug(f"{config=}")
    return handler(config)


def _attach_numeric_values(argv: Sequence[str]) -> list[str]:
    """Glue `--weight -2,1` into `--weight=-2,1` so negative lists parse."""
    joined, tokens = [], iter(argv)
    for token in tokens:
        if token in NUMERIC_OPTIONS:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", type=Path, help="Write the result to this file.")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverflow",
        description="Quiver varieties, reflection functors and rational KP solutions.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {quiverflow.__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    roots = commands.add_parser("roots", help="Root classification and regularity.")
    roots_actions = roots.add_subparsers(dest="action", required=True)
    classify = roots_actions.add_parser("classify")
    classify.add_argument("--quiver", required=True)
    classify.add_argument("--dim", required=True, type=int_list)
    _add_output(classify)
    regular = roots_actions.add_parser("regular")
    regular.add_argument("--quiver", required=True)
    regular.add_argument("--weight", required=True, type=complex_list)
    regular.add_argument("--bound", type=int, default=12)
    _add_output(regular)
    exists = roots_actions.add_parser("exists")
    exists.add_argument("--quiver", required=True)
    exists.add_argument("--weight", required=True, type=complex_list)
    exists.add_argument("--dim", required=True, type=int_list)
    exists.add_argument("--bound", type=int, default=10_000)
    _add_output(exists)
    scan = roots_actions.add_parser("orbit-scan")
    scan.add_argument("--m", type=int, default=2)
    scan.add_argument("--height", type=int, default=8)
    scan.add_argument("--depth", type=int, default=12)
    scan.add_argument("--format", choices=["table", "csv"], default="table")
    _add_output(scan)

    rep = commands.add_parser("rep", help="Points of representation spaces.")
    rep_actions = rep.add_subparsers(dest="action", required=True)
    verify_point = rep_actions.add_parser("verify")
    verify_point.add_argument("--point", required=True)
    verify_point.add_argument("--weight", required=True, type=complex_list)
    _add_output(verify_point)
    simple = rep_actions.add_parser("simple")
    simple.add_argument("--point", required=True)
    _add_output(simple)
    bracket = rep_actions.add_parser("bracket")
    bracket.add_argument("--point", required=True)
    bracket.add_argument("--f", required=True, help="Trace word, e.g. tr:Y,Y")
    bracket.add_argument("--g", required=True)
    _add_output(bracket)

    reflect = commands.add_parser("reflect", help="Reflection functors.")
    reflect.add_argument(
        "action", nargs="?", choices=["apply", "chain"], default="apply"
    )
    reflect.add_argument("--point", required=True)
    reflect.add_argument("--weight", required=True, type=complex_list)
    reflect.add_argument("--vertex")
    reflect.add_argument("--chain", help="Comma separated vertices, left first.")
    reflect.add_argument("--mode", choices=["svd", "pivot"], default="svd")
    _add_output(reflect)

    flow = commands.add_parser("flow", help="Hamiltonian flows.")
    flow.add_argument("--point", required=True)
    flow.add_argument(
        "--hamiltonian", required=True, help="Hp:<letters>, Hlr:<l>,<r> or IA:<file>"
    )
    flow.add_argument("--t", type=float, required=True)
    flow.add_argument("--steps", type=int, default=16)
    flow.add_argument("--weight", type=complex_list)
    flow.add_argument("--log", help="CSV file for the conservation log.")
    _add_output(flow)

    cm = commands.add_parser("cm", help="Cyclic Calogero-Moser and spin systems.")
    cm_actions = cm.add_subparsers(dest="action", required=True)
    build = cm_actions.add_parser("build")
    build.add_argument("--coords", help="Chart JSON; random chart when omitted.")
    build.add_argument("--m", type=int, default=1)
    build.add_argument("--n", type=int, default=2)
    build.add_argument("--d", type=int, default=1)
    build.add_argument("--zeta", choices=[str(kind) for kind in ChartKind])
    build.add_argument("--weight", required=True, type=complex_list)
    build.add_argument("--seed", dest="rng_seed", type=int)
    _add_output(build)
    extract = cm_actions.add_parser("extract")
    extract.add_argument("--point", required=True)
    extract.add_argument("--weight", type=complex_list)
    _add_output(extract)
    rank = cm_actions.add_parser("rank")
    rank.add_argument("--point", required=True)
    rank.add_argument("--weight", required=True, type=complex_list)
    rank.add_argument("--family", choices=["Hmk", "Hlr", "H0r"], default="Hlr")
    _add_output(rank)

    op = commands.add_parser("op", help="Cherednik operator algebra.")
    op_actions = op.add_subparsers(dest="action", required=True)
    mul = op_actions.add_parser("mul")
    mul.add_argument("left")
    mul.add_argument("right")
    _add_output(mul)
    assoc = op_actions.add_parser("check-assoc")
    assoc.add_argument("--weight", type=complex_list, default=(1.0, 0.5))
    assoc.add_argument("--samples", type=int, default=3)
    assoc.add_argument("--seed", dest="rng_seed", type=int)
    assoc.add_argument("--window", type=window_pair)
    _add_output(assoc)

    kp = commands.add_parser("kp", help="Rational KP solutions.")
    kp_actions = kp.add_subparsers(dest="action", required=True)
    emit = kp_actions.add_parser("emit")
    emit.add_argument("--seed", dest="seed_file", required=True)
    emit.add_argument("--t", type=complex_list, default=())
    emit.add_argument("--format", choices=["rational", "csv"], default="rational")
    emit.add_argument("--x", type=complex_list, help="Sample points for csv output.")
    _add_output(emit)
    kp_verify = kp_actions.add_parser("verify")
    kp_verify.add_argument("--seed", dest="seed_file", required=True)
    kp_verify.add_argument("--flows", type=int_list, default=(2, 3))
    kp_verify.add_argument("--h", type=float, default=1e-3)
    kp_verify.add_argument("--window", type=window_pair)
    kp_verify.add_argument("--bound", type=float, default=1e-6)
    kp_verify.add_argument("--rng-seed", dest="rng_seed", type=int)
    kp_verify.add_argument("--report")
    kp_verify.add_argument("--samples", help="CSV file for the KP equation samples.")

    verify = commands.add_parser("verify", help="Acceptance suites.")
    verify.add_argument("suites", nargs="*", default=["all"])
    verify.add_argument("--seed", dest="rng_seed", type=int)
    verify.add_argument("--quick", action="store_true")
    verify.add_argument("--threads", type=int)
    verify.add_argument("--report")
    return parser


def _parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else argv
    args = _build_parser().parse_args(_attach_numeric_values(argv))
    if args.command in ("flow", "verify"):
        args.action = None
    if args.command == "kp" and args.action == "verify":
        args.window_set = args.window is not None
    return args


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    try:
        return dispatch(RunConfig.from_args(args))
    except ValueError as e:
        console.print(f"error: {e}", style="bold red", markup=False, soft_wrap=True)
        return 1


def cli():
    """Run the quiverflow CLI."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
