"""Acceptance suites: each returns the residuals of one family of checks."""

from collections.abc import Callable
from math import factorial

import numpy as np
from scipy.special import binom

from quiverflow.config import Window
from quiverflow.cyclic_systems import (
    CyclicPoint,
    DarbouxChart,
    chart_dimension,
    chart_dimension_audit,
    exact_flow_mk,
    from_darboux,
    independence_rank,
)
from quiverflow.hamiltonian_dynamics import flow_IA, hlr_element, hlr_observable
from quiverflow.kp_solutions import (
    KPGrid,
    SolutionSeed,
    build_M,
    constraint_residuals,
    dress,
    equivariance_residual,
    kp_pde_residual,
    lax_halving,
    lax_residual,
    reducible_extension,
)
from quiverflow.operator_algebra import (
    CherednikAlgebra,
    HBarElement,
    RationalFunction,
    coefficient_gap,
    matrix_gap,
    sample_points,
)
from quiverflow.quiver_core import (
    builtin_quiver,
    classify_root,
    framed_cyclic,
    orbit_roots,
    reflect_dim,
    reflect_weight,
    tits_forms,
    variety_dimension,
)
from quiverflow.quiver_core._roots import lattice_box
from quiverflow.reflection_functor import (
    apply_reflection,
    generating_words,
    involution_check,
    lemma_residuals,
    symplectic_proxy_check,
    trace_pullback_check,
)
from quiverflow.rep_variety import (
    TraceWord,
    collision_point,
    poisson_bracket,
    relation_residual,
)
from quiverflow.utils.common import ChartKind, RootKind
from quiverflow.verify._report import CheckResult

Suite = Callable[[np.random.Generator, bool], list[CheckResult]]

LAM2 = (1.0, 0.5)
LAM3 = (1.0, -0.3, 0.6)
LAM4 = (1.0, 0.3, -0.2, 0.5)


def _scaled(value: float, scale: float, power: int = 2) -> float:
    return float(value) / max(1.0, scale) ** power


def _cm_chart(x, p) -> DarbouxChart:
    n = len(x)
    return DarbouxChart.normalized(
        ChartKind.JORDAN, 1, x, p, np.ones((n, 1, 1)), np.zeros((n, 1, 1)), (1.0,)
    )


def _delta_point(rng: np.random.Generator, n: int = 2, d: int = 1, lam=LAM2):
    chart = DarbouxChart.random(ChartKind.DELTA, n, len(lam), d, lam, rng)
    cp = from_darboux(chart, lam)
    return cp, cp.weight(lam)


def moment_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    items = []
    for n in (1, 2) if quick else (1, 2, 3, 5):
        chart = DarbouxChart.random(ChartKind.JORDAN, n, 1, 1, (1.0,), rng)
        cp = from_darboux(chart, (1.0,))
        residual = _scaled(cp.relation_residual((1.0,)), cp.point.scale())
        items.append(CheckResult.at_most("moment", f"cm n={n}", residual, 1e-11))
    for kind in ("coll2a", "coll2b"):
        point = collision_point(kind, 0.7 - 0.2j, 1.5, -0.3 + 0.4j)
        residual = relation_residual(point, (-2.0, 1.0))
        items.append(CheckResult.at_most("moment", kind, residual, 1e-14))
    return items


def roots_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    height = 4 if quick else 6
    items = []
    for name in ("jordan", "cyclic:2", "cyclic:3", "A:2"):
        quiver = builtin_quiver(name)
        roots = orbit_roots(quiver, height)
        disagreements = wrong_q = 0
        for alpha in lattice_box(quiver, height):
            root = classify_root(quiver, alpha)
            key = tuple(int(a) for a in alpha)
            disagreements += root.is_root != (key in roots)
            q, _ = tits_forms(quiver, alpha)
            wrong_q += root.kind == RootKind.REAL and q != 1
            wrong_q += root.kind == RootKind.IMAGINARY and q > 0
        items.append(
            CheckResult.exact("roots", f"{name} orbit agreement", disagreements, 0)
        )
        items.append(CheckResult.exact("roots", f"{name} tits form", wrong_q, 0))

        lam = rng.normal(size=quiver.size)
        pairing = 0.0
        for k in quiver.loop_free:
            for alpha in lattice_box(quiver, 3):
                lhs = lam @ alpha
                rhs = reflect_weight(quiver, k, lam) @ reflect_dim(quiver, k, alpha)
                pairing = max(pairing, abs(lhs - rhs))
        items.append(CheckResult.at_most("roots", f"{name} pairing", pairing, 1e-12))
    return items


def reflection_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    samples, involutions = (5, 2) if quick else (100, 20)
    lemma = involution = 0.0
    dims = pullback = 0
    words = None
    for sample in range(samples):
        cp, weight = _delta_point(rng)
        point = cp.point
        quiver = point.quiver
        for k in ("0", "1", "inf"):
            result = apply_reflection(point, k, weight)
            scale = max(1.0, result.point.scale()) ** 2
            values = lemma_residuals(point, result).values()
            lemma = max(lemma, max(values) / scale)
            found = tuple(result.dims)
            expected = tuple(int(a) for a in reflect_dim(quiver, k, point.dims))
            dims += found != expected
            if sample < involutions:
                if words is None:
                    words = generating_words(quiver, 4)
                gap = involution_check(point, k, weight, words=words)
                involution = max(involution, gap)
        result = apply_reflection(point, "0", weight)
        for text in ("tr:x1,x1*", "tr:x0,x1", "tr:b1_1,b1_1*"):
            word = TraceWord.parse(quiver, text)
            check = trace_pullback_check(point, "0", weight, word, 1e-8, result)
            pullback += not check.match
    return [
        CheckResult.at_most("reflection", "lemma identities", lemma, 1e-9),
        CheckResult.exact("reflection", "dimension vectors", int(dims), 0),
        CheckResult.at_most("reflection", "involution traces", involution, 1e-8),
        CheckResult.exact("reflection", "trace pullbacks", int(pullback), 0),
    ]


def symplectic_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    pairs = [("tr:x1*,x0*", "tr:x0,x1"), ("tr:x1*,x0*,x1*,x0*", "tr:x0,x1")]
    # the framing word cancels through inf
    framing_pair = ("tr:b0_1,x1*,x0*,b0_1*", "tr:x0,x1")
    worst = 0.0
    for _ in range(2 if quick else 10):
        cp, weight = _delta_point(rng)
        quiver = cp.point.quiver
        for k in ("0", "1", "inf"):
            result = apply_reflection(cp.point, k, weight)
            checked = pairs if k == "inf" else [*pairs, framing_pair]
            for first, second in checked:
                w1, w2 = TraceWord.parse(quiver, first), TraceWord.parse(quiver, second)
                gap = symplectic_proxy_check(cp.point, k, weight, w1, w2, result=result)
                worst = max(worst, gap)
    return [CheckResult.at_most("symplectic", "star-word brackets", worst, 1e-8)]


def commuting_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    cases = [(2, 2, 1)] if quick else [(1, 2, 1), (2, 2, 1), (1, 2, 2)]
    items = []
    for n, m, d in cases:
        lam = LAM2 if m == 2 else (1.0,)
        cp, _ = _delta_point(rng, n=n, d=d, lam=lam)
        labels = [(k, r) for k in range(2 * m + 1) for r in range(1, d + 1)]
        observables = {label: hlr_observable(cp.framed, *label) for label in labels}
        worst = 0.0
        for first in labels:
            for second in labels:
                if first >= second:
                    continue
                bracket = poisson_bracket(
                    cp.point, observables[first], observables[second]
                )
                power = first[0] + second[0]
                worst = max(worst, _scaled(abs(bracket), cp.point.scale(), power))
        items.append(
            CheckResult.at_most("commuting", f"n={n} m={m} d={d}", worst, 1e-8)
        )
    return items


def ranks_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    cases = [
        (ChartKind.EPS0, "Hmk", 2, 2, 1),
        (ChartKind.EPS0, "Hmk", 2, 2, 2),
        (ChartKind.EPS0, "Hmk", 3, 2, 1),
        (ChartKind.DELTA, "Hlr", 1, 2, 1),
        (ChartKind.DELTA, "Hlr", 2, 2, 1),
    ]
    if quick:
        cases = [cases[1], cases[3]]
    items = []
    for kind, family, n, m, d in cases:
        chart = DarbouxChart.random(kind, n, m, d, LAM2, rng)
        result = independence_rank(chart, LAM2, family)
        expected = n * d if kind == ChartKind.EPS0 else n * m * d
        label = f"{kind} n={n} m={m} d={d}"
        items.append(CheckResult.exact("ranks", f"{label} rank", result.rank, expected))
        items.append(CheckResult.at_least("ranks", f"{label} gap", result.gap, 1e6))
    return items


def dimension_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    cases = [
        (ChartKind.JORDAN, 3, 1, 1, (1.0,)),
        (ChartKind.JORDAN, 2, 1, 2, (1.0,)),
        (ChartKind.EPS0, 2, 2, 2, LAM2),
        (ChartKind.DELTA, 2, 2, 1, LAM2),
    ]
    items = []
    for kind, n, m, d, lam in cases:
        chart = DarbouxChart.random(kind, n, m, d, lam, rng)
        coordinates, dimension = chart_dimension_audit(from_darboux(chart, lam))
        label = f"{kind} n={n} m={m} d={d}"
        items.append(CheckResult.exact("dimension", label, coordinates, dimension))
    expected = {
        ChartKind.JORDAN: lambda n, m, d: 2 * n * d,
        ChartKind.EPS0: lambda n, m, d: 2 * n * d,
        ChartKind.DELTA: lambda n, m, d: 2 * n * m * d,
    }
    for kind, n, m, d, _ in cases:
        found = chart_dimension(kind, n, m, d)
        label = f"{kind} n={n} m={m} d={d} formula"
        items.append(
            CheckResult.exact("dimension", label, found, expected[kind](n, m, d))
        )
    for n in (1, 2, 3):
        found = variety_dimension(framed_cyclic(1, 1), (n,))
        items.append(CheckResult.exact("dimension", f"C_{n}", found, 2 * n))
    return items


def flows_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    items = []
    cp, weight = _delta_point(rng, n=1)
    framed = cp.framed
    monitors = {
        "H2,1": hlr_observable(framed, 2, 1),
        "H0,1": hlr_observable(framed, 0, 1),
    }
    for ell, t in [(1, 1.0)] if quick else [(1, 1.0), (2, 0.5)]:
        trajectory = flow_IA(
            cp.point, hlr_element(framed, ell, 1), t, 4, lam=weight, monitors=monitors
        )
        log = trajectory.conserved.drop("t")
        worst = max(float(log[column].max()) for column in log.columns)
        drift = _scaled(worst, trajectory.final.scale())
        label = f"H{ell},1 conservation"
        items.append(CheckResult.at_most("flows", label, drift, 1e-8))

    chart = DarbouxChart.random(ChartKind.EPS0, 2, 2, 2, LAM2, rng)
    moved = exact_flow_mk(from_darboux(chart, LAM2), [0.3, 0.1], LAM2)
    residual = _scaled(moved.relation_residual(LAM2), moved.point.scale())
    items.append(CheckResult.at_most("flows", "exact flow residual", residual, 1e-12))
    return items


def _textbook_gap(
    rng: np.random.Generator, algebra: CherednikAlgebra, power: int
) -> float:
    """y^power (c/(x - a)) against sum_s binom(power, s) lam^s g^(s) y^(power - s)."""
    a = complex(rng.normal(), rng.normal())
    c = complex(rng.normal(), rng.normal())
    lam = algebra.lam[0]
    product = HBarElement.y(algebra, power) * HBarElement.constant(
        algebra, RationalFunction.pole(a, 1, c)
    )
    points = sample_points([a], 4, rng, exclusion=0.5)
    worst = 0.0
    s = 0
    while power - s >= algebra.low and (power < 0 or s <= power):
        derivative = c * (-1) ** s * factorial(s) / (points - a) ** (s + 1)
        # upper negation keeps binom on nonnegative arguments
        if power >= 0:
            weight = binom(power, s)
        else:
            weight = (-1) ** s * binom(s - power - 1, s)
        expected = weight * lam**s * derivative
        found = product.coefficient(power - s).parts[0](points)
        scale = max(1.0, float(np.abs(expected).max()))
        worst = max(worst, float(np.abs(found - expected).max()) / scale)
        s += 1
    return worst


def associativity_gap(algebra: CherednikAlgebra, rng: np.random.Generator) -> float:
    """Relative gap between (AB)C and A(BC) for operators with a random pole."""
    x, y = HBarElement.x(algebra), HBarElement.y(algebra)
    y_inv = HBarElement.y(algebra, -1)
    a = complex(2.0 + rng.uniform(), rng.uniform())
    pole = HBarElement.constant(algebra, RationalFunction.pole(a, 1, 1.0))
    A = x * y + pole
    B = y_inv * x + y
    C = x * x + y_inv
    left, right = (A * B) * C, A * (B * C)
    points = sample_points(left.poles() | right.poles(), 6, rng, exclusion=1.0)
    values = [np.abs(v).max() for v in left.evaluate(points).values()]
    return coefficient_gap(left, right, points) / max([1.0, *values])


def operators_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    items = []
    algebra = CherednikAlgebra((1.0,), -12, 6)
    textbook = 0.0
    for _ in range(5 if quick else 50):
        power = int(rng.choice([-3, -2, -1, 1, 2]))
        textbook = max(textbook, _textbook_gap(rng, algebra, power))
    items.append(CheckResult.at_most("operators", "m=1 product", textbook, 1e-12))

    for lam in [LAM2, LAM3] if quick else [LAM2, LAM3, LAM4]:
        alg = CherednikAlgebra(lam, -5, 4)
        x, y = HBarElement.x(alg), HBarElement.y(alg)
        gap = associativity_gap(alg, rng)
        items.append(
            CheckResult.at_most("operators", f"associativity m={len(lam)}", gap, 1e-9)
        )

        difference = y * x - x * y
        relation = (difference.coefficient(0) - alg.c()).norm()
        if set(difference.terms) != {0}:
            relation = float("inf")
        label = f"yx - xy = c m={len(lam)}"
        items.append(CheckResult.at_most("operators", label, relation, 1e-14))
    return items


# Lax residuals below this carry no halving information
NOISE_FLOOR = 1e-10


def _kp_seed(x, p) -> SolutionSeed:
    window = Window(low=-(len(x) + 2), high=4)
    return SolutionSeed.from_chart(_cm_chart(x, p), (1.0,), window)


def _kp_seeds(quick: bool) -> dict[str, SolutionSeed]:
    seeds = {
        "n=1": _kp_seed([0.4 + 0.1j], [0.3]),
        "n=2": _kp_seed([0.9, -0.9 + 0.4j], [0.2, -0.1]),
    }
    if not quick:
        seeds["n=3"] = _kp_seed([1.5, -1.4 + 0.7j, 0.1 - 1.6j], [0.2, -0.15, 0.1])
        seeds["collision"] = SolutionSeed(
            CyclicPoint(framed_cyclic(1, 1), collision_point("coll2a", 0.2, 0.5, -0.3)),
            (1.0,),
        )
    return seeds


def _order_check(suite: str, check: str, coarse: float, fine: float) -> CheckResult:
    if coarse <= NOISE_FLOOR:
        return CheckResult.skip(suite, check, coarse, NOISE_FLOOR)
    ratio = coarse / fine if fine > 0 else float("inf")
    return CheckResult.at_least(suite, check, ratio, 3.5)


def kp_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    items = []
    for label, seed in _kp_seeds(quick).items():
        pde = kp_pde_residual(seed, KPGrid.around(seed))
        items.append(CheckResult.at_most("kp", f"{label} kp equation", pde, 1e-8))
        if label == "collision":
            continue
        for ell in (2,) if quick else (2, 3):
            check = f"{label} lax l={ell}"
            coarse, fine = lax_halving(seed, ell, None, 1e-3, rng, exclusion=2.0)
            items.append(CheckResult.at_most("kp", check, coarse, 1e-6))
            items.append(_order_check("kp", f"{check} order", coarse, fine))
    return items


def generalized_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    cases = [(2, 1, LAM2), (2, 2, LAM2), (3, 1, LAM3)]
    if quick:
        cases = cases[:1]
    items = []
    for m, d, lam in cases:
        label = f"m={m} d={d}"
        # the bracket with L^m reaches order m + 1
        window = Window(low=-(m + 3), high=m + 1)
        chart = DarbouxChart.random(ChartKind.EPS0, 1, m, d, lam, rng, momentum=0.3)
        spherical = SolutionSeed.from_chart(chart, lam, window)
        lax = dress(build_M(spherical), spherical)
        residual = equivariance_residual(lax, rng=rng, exclusion=0.5)
        items.append(
            CheckResult.at_most("generalized", f"{label} equivariance", residual, 1e-10)
        )
        residual = lax_residual(spherical, m, h=1e-3, rng=rng, exclusion=1.5)
        items.append(
            CheckResult.at_most("generalized", f"{label} spherical lax", residual, 1e-6)
        )

        chart = DarbouxChart.random(ChartKind.DELTA, 1, m, d, lam, rng)
        full = SolutionSeed.from_chart(chart, lam, window)
        constraints = constraint_residuals(
            dress(build_M(full), full), rng=rng, exclusion=0.5
        )
        for name, value in constraints.items():
            items.append(
                CheckResult.at_most("generalized", f"{label} {name}", value, 1e-9)
            )

    chart = DarbouxChart.random(ChartKind.JORDAN, 1, 1, 2, (1.0,), rng, momentum=0.3)
    seed = SolutionSeed.from_chart(chart, (1.0,), Window(low=-4, high=3))
    for r in (1, 2):
        residual = lax_residual(seed, 1, r, h=1e-3, rng=rng, exclusion=1.5)
        items.append(
            CheckResult.at_most("generalized", f"matrix lax l=1 r={r}", residual, 1e-6)
        )
    return items


def reducible_suite(rng: np.random.Generator, quick: bool) -> list[CheckResult]:
    # lambda . (1, 2) = 0, so lambda is not regular
    lam = (1.0, -0.5)
    point = from_darboux(DarbouxChart.random(ChartKind.DELTA, 1, 2, 1, lam, rng), lam)
    seed = SolutionSeed(point, lam, Window(low=-7, high=3), allow_reducible=True)
    X = [np.array([[1.0], [0.0]]), np.array([[0.0, 0.5]])]
    Y = [np.array([[-0.5, 0.0]]), np.array([[0.0], [1.0]])]
    extended = reducible_extension(seed, X, Y)
    M, M_extended = build_M(seed), build_M(extended)
    points = sample_points(M.poles() | M_extended.poles(), 5, rng, exclusion=0.5)
    gap = matrix_gap(M_extended, M, points)
    return [CheckResult.at_most("reducible", "M of the simple factor", gap, 1e-8)]


SUITES: dict[str, Suite] = {
    "moment": moment_suite,
    "roots": roots_suite,
    "reflection": reflection_suite,
    "symplectic": symplectic_suite,
    "commuting": commuting_suite,
    "ranks": ranks_suite,
    "dimension": dimension_suite,
    "flows": flows_suite,
    "operators": operators_suite,
    "kp": kp_suite,
    "generalized": generalized_suite,
    "reducible": reducible_suite,
}
