import numpy as np
import pytest

from quiverflow.cyclic_systems import DarbouxChart, from_darboux, hamiltonian_Hmk
from quiverflow.hamiltonian_dynamics import (
    LZetaElement,
    PathCapError,
    QStarPath,
    StepUnderflowError,
    Trajectory,
    all_q_star_paths,
    flow_exact_Hp,
    flow_IA,
    hamiltonian_Hlr,
    hamiltonian_Hp,
    has_q_star_cycle,
    hlr_element,
    hlr_observable,
    ia_observable,
    integral_IA,
    lzeta_bracket,
    q_star_cycles,
    q_star_paths,
)
from quiverflow.quiver_core import builtin_quiver, cyclic_quiver, framed_cyclic
from quiverflow.rep_variety import (
    WordError,
    gauge_act,
    poisson_bracket,
    random_gauge,
    relation_residual,
    trace_word,
)
from quiverflow.utils.common import ChartKind

LAM = (1.0, 0.5)


def _delta_point(rng, n=1, d=1, lam=LAM):
    chart = DarbouxChart.random(ChartKind.DELTA, n, len(lam), d, lam, rng)
    return from_darboux(chart, lam)


def _cm_point(x, p, lam=1.0):
    n = len(x)
    chart = DarbouxChart.normalized(
        ChartKind.JORDAN,
        1,
        np.asarray(x, dtype=complex),
        np.asarray(p, dtype=complex),
        np.ones((n, 1, 1)),
        np.zeros((n, 1, 1)),
        (lam,),
    )
    return from_darboux(chart, (lam,))


def test_q_star_paths():
    q2 = cyclic_quiver(2)
    cycles = q_star_paths(q2, "0", "0", 2)
    assert len(cycles) == 1
    assert cycles.paths[0].letters == ("x1*", "x0*")
    assert cycles.paths[0] == QStarPath.from_letters(q2, ("x1*", "x0*"))
    assert len(q_star_cycles(cyclic_quiver(3), "0", 3)) == 1
    assert len(q_star_paths(q2, "0", "1", 2)) == 0
    assert len(all_q_star_paths(q2, 1)) == 2
    assert has_q_star_cycle(builtin_quiver("jordan"))
    assert not has_q_star_cycle(builtin_quiver("A:2"))

    path = cycles.paths[0]
    assert len(list(path.splits())) == 3
    for first, second in path.splits():
        assert first.then(second) == path

    with pytest.raises(WordError):
        QStarPath.from_letters(q2, ("x0",))
    with pytest.raises(WordError):
        QStarPath.from_letters(q2, ("x1*", "x1*"))
    with pytest.raises(ValueError):
        q_star_paths(q2, "0", "0", -1)


def test_hamiltonian_Hp(rng):
    cp = _delta_point(rng, n=2)
    point = cp.point
    assert hamiltonian_Hp(point, QStarPath.trivial("0")) == 2
    cycle = QStarPath.from_letters(cp.framed.quiver, ("x1*", "x0*"))
    np.testing.assert_allclose(
        hamiltonian_Hp(point, cycle), np.trace(cp.Y(0) @ cp.Y(1))
    )
    np.testing.assert_allclose(hamiltonian_Hp(point, cycle), hamiltonian_Hmk(cp, 1))

    with pytest.raises(WordError):
        hamiltonian_Hp(point, QStarPath(("0", "1", "0"), ("x0", "x1")))
    with pytest.raises(WordError):
        hamiltonian_Hp(point, QStarPath(("0", "1"), ("x1*",)))


def test_calogero_moser_h2():
    x, p = (0.3 + 0.1j, -0.7 + 0.4j), (0.5, -1.2 + 0.3j)
    cp = _cm_point(x, p)
    loop = QStarPath.from_letters(cp.framed.quiver, ("x0*", "x0*"))
    expected = p[0] ** 2 + p[1] ** 2 - 2 / (x[0] - x[1]) ** 2
    np.testing.assert_allclose(hamiltonian_Hp(cp.point, loop), expected, rtol=1e-12)


def test_integrals(rng):
    cp = _delta_point(rng, n=2, d=2)
    framed, point = cp.framed, cp.point
    assert integral_IA(point, LZetaElement(framed)) == 0

    # sum_r H_{0,r} = -lambda . alpha on the level set
    total = sum(hamiltonian_Hlr(point, framed, 0, r) for r in [1, 2])
    np.testing.assert_allclose(total, -np.dot(LAM, cp.dims), rtol=1e-9)
    np.testing.assert_allclose(
        hamiltonian_Hlr(point, framed, 0, 1),
        -sum(cp.w(i)[0, :] @ cp.v(i)[:, 0] for i in range(2)),
    )
    assert hamiltonian_Hlr(point, framed, 0, 5) == 0

    # -(1 / |lambda|) sum_r H_{mk,r} = H_{mk}
    hmk = -sum(hamiltonian_Hlr(point, framed, 2, r) for r in [1, 2]) / sum(LAM)
    np.testing.assert_allclose(hmk, hamiltonian_Hmk(cp, 1), rtol=1e-9)


def test_constant_and_unit_elements(rng):
    cp = _delta_point(rng)
    framed = cp.framed
    constant = LZetaElement.constant(framed, 1, np.eye(1))
    unit = hlr_element(framed, 1, 1)
    np.testing.assert_allclose(
        integral_IA(cp.point, constant), integral_IA(cp.point, unit), rtol=1e-12
    )

    with pytest.raises(ValueError):
        LZetaElement.constant(framed_cyclic(2, 1), 0, np.eye(2))


def test_lzeta_bracket(rng):
    framed = framed_cyclic(2, (1, 1))
    a = LZetaElement.random(framed, 1, rng)
    b = LZetaElement.random(framed, 1, rng)
    c = LZetaElement.random(framed, 1, rng)
    assert lzeta_bracket(a, a).norm() <= 1e-12
    assert (lzeta_bracket(a, b) + lzeta_bracket(b, a)).norm() <= 1e-12
    jacobi = (
        lzeta_bracket(a, lzeta_bracket(b, c))
        + lzeta_bracket(b, lzeta_bracket(c, a))
        + lzeta_bracket(c, lzeta_bracket(a, b))
    )
    assert jacobi.norm() <= 1e-10

    framed = framed_cyclic(2, (2, 2))
    for k, ell in [(0, 1), (1, 2), (2, 2)]:
        for r, s in [(1, 1), (1, 2)]:
            bracket = lzeta_bracket(
                hlr_element(framed, k, r), hlr_element(framed, ell, s)
            )
            assert bracket.norm() == 0

    with pytest.raises(PathCapError):
        LZetaElement.unit(framed, 3, 1, cap=2)
    short = LZetaElement.unit(framed, 2, 1, cap=3)
    with pytest.raises(PathCapError):
        lzeta_bracket(short, short)


def test_integrals_close_under_brackets(rng):
    cp = _delta_point(rng, n=1, d=2)
    a = LZetaElement.random(cp.framed, 1, rng)
    b = LZetaElement.random(cp.framed, 2, rng)
    bracket = poisson_bracket(cp.point, ia_observable(a), ia_observable(b))
    expected = integral_IA(cp.point, lzeta_bracket(a, b))
    np.testing.assert_allclose(bracket, expected, rtol=1e-9, atol=1e-9)


def test_hamiltonians_commute(rng):
    cp = _delta_point(rng, n=2)
    framed = cp.framed
    labels = [(k, 1) for k in range(0, 5)]
    for k, r in labels:
        for ell, s in labels:
            if (k, r) >= (ell, s):
                continue
            value = poisson_bracket(
                cp.point, hlr_observable(framed, k, r), hlr_observable(framed, ell, s)
            )
            assert abs(value) <= 1e-8, (k, ell)


def test_gauge_invariance(rng):
    cp = _delta_point(rng, n=2)
    moved = gauge_act(random_gauge(cp.point, rng), cp.point)
    for ell in [0, 1, 2, 3]:
        np.testing.assert_allclose(
            hamiltonian_Hlr(moved, cp.framed, ell, 1),
            hamiltonian_Hlr(cp.point, cp.framed, ell, 1),
            rtol=1e-10,
        )


def test_exact_Hp_flow(rng):
    cp = _cm_point((0.2, 1.1 - 0.3j, -0.8 + 0.5j), (0.4, -0.1j, 1.0))
    point = cp.point
    quiver = cp.framed.quiver
    Y = point.mat("x0*")
    cube = QStarPath.from_letters(quiver, ("x0*",) * 3)
    square = QStarPath.from_letters(quiver, ("x0*",) * 2)

    assert flow_exact_Hp(point, cube, 0).mats.keys() == point.mats.keys()
    moved = flow_exact_Hp(point, cube, 0.3)
    np.testing.assert_allclose(
        moved.mat("x0"), point.mat("x0") - 3 * 0.3 * Y @ Y, atol=1e-12
    )
    np.testing.assert_allclose(moved.mat("x0*"), Y)
    np.testing.assert_allclose(moved.mat("b0_1"), point.mat("b0_1"))
    weight = cp.weight((1.0,))
    assert relation_residual(moved, weight) <= 1e-12 * max(1.0, moved.scale()) ** 2

    one = flow_exact_Hp(flow_exact_Hp(point, cube, 0.3), square, -0.2)
    other = flow_exact_Hp(flow_exact_Hp(point, square, -0.2), cube, 0.3)
    for a in point.mats:
        np.testing.assert_allclose(one.mat(a), other.mat(a), atol=1e-10)


def test_flow_IA_conservation(rng):
    cp = _delta_point(rng)
    framed = cp.framed
    weight = cp.weight(LAM)
    monitors = {
        "H2,1": hlr_observable(framed, 2, 1),
        "H0,1": hlr_observable(framed, 0, 1),
    }
    trajectory = flow_IA(
        cp.point, hlr_element(framed, 1, 1), 1.0, steps=4, lam=weight, monitors=monitors
    )
    assert len(trajectory.points) == 5
    log = trajectory.conserved
    assert log.columns == ["t", "residual", "I_A_drift", "H2,1_drift", "H0,1_drift"]
    for column in ["residual", "I_A_drift", "H2,1_drift", "H0,1_drift"]:
        assert log[column].max() <= 1e-8, column

    final = trajectory.final
    # starred matrices do not move
    np.testing.assert_allclose(final.mat("x0*"), cp.point.mat("x0*"))
    cycle = QStarPath.from_letters(framed.quiver, ("x1*", "x0*"))
    np.testing.assert_allclose(
        hamiltonian_Hp(final, cycle), hamiltonian_Hp(cp.point, cycle), rtol=1e-10
    )


def test_flow_IA_edge_cases(rng):
    cp = _delta_point(rng)
    element = hlr_element(cp.framed, 1, 1)
    still = flow_IA(cp.point, element, 0.0)
    assert len(still.points) == 1
    assert still.final is cp.point

    with pytest.raises(ValueError):
        flow_IA(cp.point, element, 1.0, steps=0)
    with pytest.raises(StepUnderflowError):
        flow_IA(cp.point, element, 1e-20, steps=1)
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 0.0]), (cp.point, cp.point), still.conserved)


def test_trace_word_of_trivial_path(rng):
    cp = _delta_point(rng, n=2)
    word = QStarPath.trivial("1").trace_word(cp.framed.quiver)
    assert trace_word(cp.point, word) == 2
