import numpy as np
import pytest

from quiverflow.quiver_core import (
    FramedQuiver,
    LoopVertexError,
    Quiver,
    QuiverError,
    builtin_quiver,
    classify_root,
    cyclic_quiver,
    framed_cyclic,
    is_regular,
    orbit_roots,
    orbit_scan,
    orbit_search,
    reflect_dim,
    reflect_weight,
    rep_existence,
    sigma_lambda_test,
    tits_forms,
    variety_dimension,
)
from quiverflow.quiver_core._quiver import Edge
from quiverflow.quiver_core._roots import bilinear_form, lattice_box
from quiverflow.utils.common import RootKind, TriState


def test_builtin_quivers():
    assert builtin_quiver("jordan").size == 1
    assert builtin_quiver("cyclic:3").size == 3
    assert builtin_quiver("A:4").size == 4
    assert builtin_quiver("A:4").edge("a0").head == "1"

    for name in ["bogus", "cyclic:x", "A:0", "jordan:2"]:
        with pytest.raises(QuiverError):
            builtin_quiver(name)


def test_quiver_validation():
    with pytest.raises(QuiverError):
        Quiver(("0", "0"), ())
    with pytest.raises(QuiverError):
        Quiver(("0",), (Edge("a", "0", "1"),))
    with pytest.raises(QuiverError):
        Quiver(("0", "1"), (Edge("a", "0", "1"),), is_double=True)

    double = cyclic_quiver(2).double()
    assert double.is_double
    assert double.edge("x0*").tail == "1"
    assert double.base() == cyclic_quiver(2)


def test_framing():
    framed = FramedQuiver.from_zeta(cyclic_quiver(2), {"0": 2})
    assert framed.zeta == (2, 0)
    assert framed.d == 2
    assert [e.id for e in framed.framing_edges] == ["b0_1", "b0_2"]
    assert framed.quiver.vertices == ("inf", "0", "1")
    np.testing.assert_array_equal(framed.extended_dim((1, 1)), [1, 1, 1])
    np.testing.assert_allclose(framed.extended_weight((1.0, 2.0), (1, 1)), [-3, 1, 2])

    with pytest.raises(QuiverError):
        FramedQuiver.from_zeta(cyclic_quiver(2), {"7": 1})


def test_bilinear_and_tits_forms():
    q2 = cyclic_quiver(2)
    assert bilinear_form(q2, (1, 0), (0, 1)) == -2
    assert tits_forms(cyclic_quiver(3), (1, 1, 1)) == (0, 1)
    assert tits_forms(q2, (1, 0)) == (1, 0)
    assert tits_forms(builtin_quiver("jordan"), (3,)) == (0, 1)


def test_reflections():
    q2 = cyclic_quiver(2)
    np.testing.assert_array_equal(reflect_dim(q2, "0", (1, 1)), [1, 1])
    np.testing.assert_array_equal(reflect_dim(q2, "0", (0, 1)), [2, 1])
    np.testing.assert_allclose(reflect_weight(q2, "0", (3.0, 5.0)), [-3.0, 11.0])

    with pytest.raises(LoopVertexError):
        reflect_dim(builtin_quiver("jordan"), "0", (1,))


def test_classify_root_examples():
    assert str(classify_root(cyclic_quiver(3), (1, 1, 1))) == "imaginary(+)"
    assert classify_root(cyclic_quiver(2), (2, 0)).kind == RootKind.NOT_ROOT
    assert classify_root(cyclic_quiver(2), (2, 1)).kind == RootKind.REAL
    assert classify_root(cyclic_quiver(2), (-2, -1)).sign == -1
    assert classify_root(cyclic_quiver(2), (1, -1)).kind == RootKind.NOT_ROOT
    assert classify_root(builtin_quiver("jordan"), (4,)).kind == RootKind.IMAGINARY
    assert classify_root(builtin_quiver("A:2"), (1, 2)).kind == RootKind.NOT_ROOT


@pytest.mark.parametrize("name", ["jordan", "cyclic:2", "cyclic:3", "A:2"])
def test_classify_root_matches_orbit_enumeration(name):
    quiver = builtin_quiver(name)
    roots = orbit_roots(quiver, 6)
    for alpha in lattice_box(quiver, 6):
        root = classify_root(quiver, alpha)
        assert root.is_root == (tuple(int(a) for a in alpha) in roots), alpha
        q, _ = tits_forms(quiver, alpha)
        if root.kind == RootKind.REAL:
            assert q == 1
        if root.kind == RootKind.IMAGINARY:
            assert q <= 0


def test_is_regular():
    q2 = cyclic_quiver(2)
    result = is_regular(q2, (1, -1))
    assert not result.regular and result.exact
    assert result.witness == (1, 1)

    result = is_regular(q2, (1, 2))
    assert result.regular and result.exact

    result = is_regular(builtin_quiver("A:2"), (1, 1))
    assert result.regular and not result.exact
    assert result.bound == 12

    result = is_regular(builtin_quiver("A:2"), (1, -1))
    assert not result.regular
    assert result.witness == (1, 1)


def test_rep_existence_and_sigma_lambda():
    q2 = cyclic_quiver(2)
    assert rep_existence(q2, (1, -1), (1, 1)).state == TriState.YES
    assert rep_existence(q2, (1, 2), (1, 0)).state == TriState.NO

    result = sigma_lambda_test(q2, (1, -1), (2, 2))
    assert result.state == TriState.NO
    assert result.witness == ((1, 1), (1, 1))

    jordan = framed_cyclic(1, 1).quiver
    for lam, alpha in [((0, 1), (1, 0)), ((-1, 1), (1, 1))]:
        result = sigma_lambda_test(jordan, lam, alpha)
        assert result.state == TriState.YES
        assert result.witness == ()
    assert sigma_lambda_test(q2, (0, 1), (1, 0)).state == TriState.YES


def test_variety_dimensions():
    jordan = framed_cyclic(1, 1)
    for n in [1, 2, 3]:
        assert variety_dimension(jordan, (n,)) == 2 * n
    assert variety_dimension(framed_cyclic(2, 2), (1, 1)) == 2 * 1 * 2
    assert variety_dimension(framed_cyclic(2, (1, 1)), (1, 1)) == 2 * 1 * 2 * 1
    assert variety_dimension(framed_cyclic(3, (2, 2, 2)), (1, 1, 1)) == 2 * 3 * 2


def test_orbit_search_finds_identity_chain():
    framed = framed_cyclic(2, 1)
    lam = framed.extended_weight((1.0, 2.0), (1, 1))
    chain = orbit_search(
        framed.quiver,
        (lam, framed.extended_dim((1, 1))),
        lambda _lam, alpha: alpha[0] == 1 and alpha[1] == alpha[2],
        depth=4,
    )
    assert chain == []


def test_orbit_scan_table():
    table = orbit_scan(2, 4)
    assert table.columns == ["alpha", "q", "p", "reached", "n", "chain"]
    row = table.filter(table["alpha"] == "1,1").row(0, named=True)
    assert row["reached"]
    assert row["n"] == 1
    assert row["chain"] == ""
