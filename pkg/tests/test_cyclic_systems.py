from types import SimpleNamespace

import numpy as np
import pytest

from quiverflow.cyclic_systems import (
    ChartBoundaryError,
    ChartKindError,
    CrossCheckError,
    CyclicPoint,
    DarbouxChart,
    PoleInputError,
    chart_dimension,
    chart_dimension_audit,
    darboux_tangents,
    embed_eps0_in_delta,
    eps0_locus_drift,
    exact_flow_mk,
    from_darboux,
    hamiltonian_Hlr_cyclic,
    hamiltonian_Hmk,
    hlr_words,
    hmk_from_framing,
    independence_rank,
    infer_kind,
    j_element,
    j_ell,
    partial_fraction_identity,
    symplectic_form_residual,
    to_darboux,
)
from quiverflow.hamiltonian_dynamics import flow_IA, hamiltonian_Hlr
from quiverflow.quiver_core import framed_cyclic
from quiverflow.rep_variety import (
    TraceWord,
    collision_point,
    gauge_act,
    is_simple,
    random_gauge,
    trace_word,
)
from quiverflow.utils.common import ChartKind

LAM2 = (1.0, 0.5)


def _chart(rng, kind, n, m, d, lam):
    return DarbouxChart.random(kind, n, m, d, lam, rng)


def _on_shell(cp, lam, bound=1e-11):
    scale = max(1.0, cp.point.scale()) ** 2
    assert cp.relation_residual(lam) <= bound * scale


def test_calogero_moser_matrices():
    chart = DarbouxChart.normalized(
        ChartKind.JORDAN,
        1,
        [0, 1],
        [0, 0],
        np.ones((2, 1, 1)),
        np.zeros((2, 1, 1)),
        (1,),
    )
    cp = from_darboux(chart, (1.0,))
    np.testing.assert_allclose(cp.Y(0), [[0, 1], [-1, 0]])
    np.testing.assert_allclose(cp.X(0), np.diag([0, 1]))
    _on_shell(cp, (1.0,), 1e-14)

    single = from_darboux(
        DarbouxChart.normalized(
            ChartKind.JORDAN,
            1,
            [0.4],
            [1.5],
            np.ones((1, 1, 1)),
            np.zeros((1, 1, 1)),
            (1,),
        ),
        (1.0,),
    )
    np.testing.assert_allclose(single.Y(0), [[1.5]])
    np.testing.assert_allclose(single.v(0) @ single.w(0), [[1.0]])


@pytest.mark.parametrize(
    "kind, n, m, d, lam",
    [
        (ChartKind.JORDAN, 3, 1, 1, (1.0,)),
        (ChartKind.JORDAN, 2, 1, 3, (0.7 - 0.2j,)),
        (ChartKind.EPS0, 2, 2, 2, LAM2),
        (ChartKind.EPS0, 2, 3, 1, (1.0, -0.3, 0.6)),
        (ChartKind.DELTA, 1, 2, 1, LAM2),
        (ChartKind.DELTA, 2, 3, 2, (0.4, 1.0, -0.5 + 0.2j)),
    ],
)
def test_from_darboux(rng, kind, n, m, d, lam):
    chart = _chart(rng, kind, n, m, d, lam)
    cp = from_darboux(chart, lam)
    _on_shell(cp, lam)
    assert infer_kind(m, cp.zeta) == kind
    momenta = sum(np.diag(cp.Y(i)) for i in range(m))
    np.testing.assert_allclose(momenta, chart.p, atol=1e-12)

    lift = cp.lift()
    assert lift.pattern_residual() == 0
    assert lift.relation_residual(lam) <= 1e-10 * max(1.0, cp.point.scale()) ** 2
    np.testing.assert_allclose(lift.to_point().Y(0), cp.Y(0))


@pytest.mark.parametrize(
    "kind, n, m, d, lam",
    [
        (ChartKind.JORDAN, 3, 1, 1, (1.0,)),
        (ChartKind.EPS0, 2, 2, 2, LAM2),
        (ChartKind.DELTA, 2, 2, 1, LAM2),
    ],
)
def test_darboux_round_trip(rng, kind, n, m, d, lam):
    chart = _chart(rng, kind, n, m, d, lam)
    cp = from_darboux(chart, lam)
    moved = CyclicPoint(cp.framed, gauge_act(random_gauge(cp.point, rng), cp.point))
    for point in [cp, moved]:
        back = to_darboux(point, lam)
        assert back.kind == chart.kind
        for name in ["x", "p", "phi", "psi"]:
            np.testing.assert_allclose(
                getattr(back, name), getattr(chart, name), atol=1e-8, err_msg=name
            )


def test_chart_boundaries():
    framed = framed_cyclic(1, 1)
    for kind in ["coll2a", "coll2b"]:
        cp = CyclicPoint(framed, collision_point(kind, 0.3, 1.0, 0.5))
        with pytest.raises(ChartBoundaryError) as info:
            to_darboux(cp)
        assert info.value.pair == (0, 1)

    spins = np.ones((2, 1, 1)), np.zeros((2, 1, 1))
    mirrored = DarbouxChart.normalized(
        ChartKind.EPS0, 2, [0.5, -0.5], [0, 1], *spins, LAM2
    )
    with pytest.raises(ChartBoundaryError) as info:
        from_darboux(mirrored, LAM2)
    assert info.value.pair == (0, 1)

    origin = DarbouxChart.normalized(ChartKind.EPS0, 2, [0, 0.5j], [0, 1], *spins, LAM2)
    with pytest.raises(ChartBoundaryError):
        from_darboux(origin, LAM2)

    with pytest.raises(ChartKindError):
        infer_kind(3, (1, 1, 0))
    with pytest.raises(ChartKindError):
        DarbouxChart(
            ChartKind.JORDAN, 2, [0.1], [0], np.ones((1, 1, 1)), np.ones((1, 1, 1))
        )


def test_cyclic_hamiltonians(rng):
    x, p = np.array([0.5 + 0.2j]), np.array([1.3 - 0.4j])
    chart = DarbouxChart.normalized(
        ChartKind.JORDAN, 1, x, p, np.ones((1, 1, 1)), np.zeros((1, 1, 1)), (1,)
    )
    cm = from_darboux(chart, (1.0,))
    for k in [1, 2, 3]:
        np.testing.assert_allclose(hamiltonian_Hmk(cm, k), p[0] ** k)

    for kind, d in [(ChartKind.EPS0, 2), (ChartKind.DELTA, 2)]:
        cp = from_darboux(_chart(rng, kind, 2, 2, d, LAM2), LAM2)
        for k in [1, 2]:
            np.testing.assert_allclose(
                hmk_from_framing(cp, k, LAM2), hamiltonian_Hmk(cp, k), rtol=1e-9
            )
        for ell in range(5):
            for r in range(1, d + 1):
                np.testing.assert_allclose(
                    hamiltonian_Hlr_cyclic(cp, ell, r),
                    hamiltonian_Hlr(cp.point, cp.framed, ell, r),
                    rtol=1e-12,
                    atol=1e-12,
                )

    cp = from_darboux(_chart(rng, ChartKind.DELTA, 1, 2, 1, LAM2), LAM2)
    expected = -(cp.w(0) @ cp.Y(0) @ cp.v(1) + cp.w(1) @ cp.Y(1) @ cp.v(0)).item()
    np.testing.assert_allclose(hamiltonian_Hlr_cyclic(cp, 1, 1), expected)
    # J_l(T) = -sum_r H_{l,r} for T = Id
    np.testing.assert_allclose(
        j_ell(cp, 1, np.eye(1)), -hamiltonian_Hlr_cyclic(cp, 1, 1)
    )

    with pytest.raises(ValueError):
        hamiltonian_Hmk(cp, 0)
    with pytest.raises(ValueError):
        hamiltonian_Hlr_cyclic(cp, -1, 1)
    with pytest.raises(ValueError):
        hmk_from_framing(cp, 1, (1.0, -1.0))


def test_exact_flow(rng):
    cm = from_darboux(_chart(rng, ChartKind.JORDAN, 3, 1, 1, (1.0,)), (1.0,))
    moved = exact_flow_mk(cm, [0, 0.2, -0.1], (1.0,))
    Y = cm.Y(0)
    np.testing.assert_allclose(
        moved.X(0), cm.X(0) - 2 * 0.2 * Y + 3 * 0.1 * Y @ Y, atol=1e-12
    )
    same = exact_flow_mk(cm, [0, 0], (1.0,))
    np.testing.assert_allclose(same.X(0), cm.X(0))

    cp = from_darboux(_chart(rng, ChartKind.EPS0, 2, 2, 2, LAM2), LAM2)
    moved = exact_flow_mk(cp, [0.3, 0.1], LAM2)
    _on_shell(moved, LAM2)
    assert moved.lift().pattern_residual() == 0
    for k in [1, 2]:
        for r in [1, 2]:
            np.testing.assert_allclose(
                hamiltonian_Hlr_cyclic(moved, 2 * k, r),
                hamiltonian_Hlr_cyclic(cp, 2 * k, r),
                rtol=1e-10,
            )


def test_exact_flow_matches_integrated_flow(rng):
    cp = from_darboux(_chart(rng, ChartKind.EPS0, 2, 2, 1, LAM2), LAM2)
    t = 0.3
    exact = exact_flow_mk(cp, [t], LAM2)
    integrated = flow_IA(cp.point, j_element(cp.framed, 2, np.eye(1)), t, steps=4)
    quiver = cp.point.quiver
    for text in ["tr:x0,x0*", "tr:x0,x1", "tr:b0_1,x0,x1,b0_1*", "tr:x0,x1,x1*,x0*"]:
        word = TraceWord.parse(quiver, text)
        np.testing.assert_allclose(
            trace_word(integrated.final, word),
            trace_word(exact.point, word),
            rtol=1e-8,
            atol=1e-8,
            err_msg=text,
        )


def test_eps0_embedding(rng):
    cp = from_darboux(_chart(rng, ChartKind.EPS0, 1, 2, 1, LAM2), LAM2)
    embedded = embed_eps0_in_delta(cp)
    assert embedded.zeta == (1, 1)
    np.testing.assert_allclose(embedded.v(0), cp.v(0))
    np.testing.assert_allclose(embedded.v(1), 0)
    _on_shell(embedded, LAM2)
    for k in [1, 2]:
        np.testing.assert_allclose(
            hamiltonian_Hlr_cyclic(embedded, 2 * k, 1),
            hamiltonian_Hlr_cyclic(cp, 2 * k, 1),
            rtol=1e-12,
        )
    with pytest.raises(ChartKindError):
        embed_eps0_in_delta(embedded)

    T = np.eye(1)
    assert eps0_locus_drift(cp, 2, T, 0.5) <= 1e-8
    assert eps0_locus_drift(cp, 1, T, 0.5) >= 1e-3


@pytest.mark.parametrize("m", [1, 2, 3, 6])
def test_partial_fraction_identity(rng, m):
    for _ in range(3):
        x, y = rng.normal(size=2) + 1j * rng.normal(size=2)
        for j in range(m):
            lhs, rhs = partial_fraction_identity(j, m, x, y)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10)
    with pytest.raises(PoleInputError):
        partial_fraction_identity(0, m, 1.0, 1.0)


def test_chart_dimension_audit(rng):
    cases = [
        (ChartKind.JORDAN, 3, 1, 1, (1.0,)),
        (ChartKind.JORDAN, 2, 1, 2, (1.0,)),
        (ChartKind.EPS0, 2, 2, 2, LAM2),
        (ChartKind.DELTA, 2, 2, 1, LAM2),
    ]
    for kind, n, m, d, lam in cases:
        chart = _chart(rng, kind, n, m, d, lam)
        coordinates, dimension = chart_dimension_audit(from_darboux(chart, lam))
        assert coordinates == dimension == chart_dimension(kind, n, m, d)
        assert chart.coordinates().shape == (coordinates,)
    assert chart_dimension(ChartKind.DELTA, 2, 3, 2) == 24
    assert chart_dimension(ChartKind.EPS0, 2, 3, 2) == 8


@pytest.mark.parametrize(
    "kind, n, m, d, lam",
    [
        (ChartKind.JORDAN, 2, 1, 2, (1.0,)),
        (ChartKind.EPS0, 2, 2, 1, LAM2),
        (ChartKind.DELTA, 1, 2, 2, LAM2),
    ],
)
def test_symplectic_form(rng, kind, n, m, d, lam):
    chart = _chart(rng, kind, n, m, d, lam)
    assert symplectic_form_residual(chart, lam) <= 1e-6


def test_hlr_words(rng):
    cp = from_darboux(_chart(rng, ChartKind.DELTA, 2, 2, 2, LAM2), LAM2)
    for ell in range(4):
        for r in (1, 2):
            words = hlr_words(cp, ell, r)
            assert len(words) == 2
            total = -sum(trace_word(cp.point, word) for word in words)
            np.testing.assert_allclose(
                total, hamiltonian_Hlr_cyclic(cp, ell, r), rtol=1e-12, atol=1e-12
            )
    assert hlr_words(cp, 1, 1)[0].letters == ("b0_1", "x1*", "b1_1*")

    eps0 = from_darboux(_chart(rng, ChartKind.EPS0, 1, 2, 1, LAM2), LAM2)
    assert hlr_words(eps0, 1, 1) == []
    assert len(hlr_words(eps0, 2, 1)) == 1
    with pytest.raises(ValueError):
        hlr_words(cp, -1, 1)


@pytest.mark.parametrize(
    "kind, n, m, d, lam",
    [
        (ChartKind.JORDAN, 2, 1, 2, (1.0,)),
        (ChartKind.EPS0, 2, 2, 1, LAM2),
        (ChartKind.DELTA, 1, 2, 2, LAM2),
    ],
)
def test_darboux_tangents(rng, kind, n, m, d, lam):
    chart = _chart(rng, kind, n, m, d, lam)
    tangents = darboux_tangents(chart, lam)
    assert len(tangents) == chart.dimension
    q0, step = chart.coordinates(), 1e-5
    for c, tangent in enumerate(tangents):
        shifted = []
        for sign in (1, -1):
            q = q0.copy()
            q[c] += sign * step
            shifted.append(from_darboux(chart.with_coordinates(q, lam), lam).point)
        for edge, matrix in tangent.items():
            difference = (shifted[0].mat(edge) - shifted[1].mat(edge)) / (2 * step)
            np.testing.assert_allclose(matrix, difference, atol=1e-6, err_msg=edge)


def test_hmk_cross_check_failure_raises(monkeypatch):
    x, p = np.array([0.5 + 0.2j]), np.array([1.3 - 0.4j])
    chart = DarbouxChart.normalized(
        ChartKind.JORDAN, 1, x, p, np.ones((1, 1, 1)), np.zeros((1, 1, 1)), (1,)
    )
    cm = from_darboux(chart, (1.0,))
    lift = cm.lift()
    monkeypatch.setattr(CyclicPoint, "lift", lambda self: SimpleNamespace(Y=2 * lift.Y))
    with pytest.raises(CrossCheckError):
        hamiltonian_Hmk(cm, 1)


def test_independence_ranks(rng):
    chart = _chart(rng, ChartKind.EPS0, 2, 2, 2, LAM2)
    result = independence_rank(chart, LAM2, "Hmk")
    assert result.rank == 4
    assert result.gap == float("inf")
    cp = from_darboux(chart, LAM2)
    custom = [[(-1.0, word) for word in hlr_words(cp, 2, r)] for r in (1, 2)]
    assert independence_rank(chart, LAM2, custom).rank == 2

    chart = _chart(rng, ChartKind.DELTA, 1, 2, 1, LAM2)
    assert independence_rank(chart, LAM2, "Hlr").rank == 2

    chart = _chart(rng, ChartKind.DELTA, 1, 2, 2, LAM2)
    result = independence_rank(chart, LAM2, "H0r")
    assert result.rank == 1
    assert result.gap >= 1e6

    with pytest.raises(ValueError):
        independence_rank(chart, LAM2, "bogus")


def test_darboux_points_are_simple(rng):
    cp = from_darboux(_chart(rng, ChartKind.DELTA, 1, 2, 1, LAM2), LAM2)
    assert is_simple(cp.point)
