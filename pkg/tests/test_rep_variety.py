import numpy as np
import pytest

from quiverflow.quiver_core import framed_cyclic
from quiverflow.rep_variety import (
    MomentHamiltonian,
    OffShellPointError,
    RepShapeError,
    TracePolynomial,
    TraceWord,
    WordError,
    collision_point,
    framed_jordan_point,
    gauge_act,
    generated_algebra_dimension,
    hamiltonian_vector_field,
    is_simple,
    moment_map,
    poisson_bracket,
    random_gauge,
    relation_residual,
    theta_commutator,
    trace_word,
    word_gradient,
    zero_point,
)


def _random_jordan_point(rng, n=3, d=1):
    def noise(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    return framed_jordan_point(noise(n, n), noise(n, n), noise(n, d), noise(d, n))


@pytest.mark.parametrize("kind", ["coll2a", "coll2b"])
def test_collision_points_are_exact(kind):
    point = collision_point(kind, 0.7 - 0.2j, 1.5, -0.3 + 0.4j)
    assert relation_residual(point, (-2.0, 1.0)) <= 1e-14
    P = moment_map(point)
    np.testing.assert_allclose(P["0"], np.eye(2), atol=1e-14)
    assert is_simple(point)

    with pytest.raises(ValueError):
        collision_point("coll3", 0, 0, 0)



@pytest.mark.parametrize("x1", [0.5, 0.5 - 0.25j])
def test_second_collision_point_at_unit_weight(x1):
    # dyadic entries keep [X, Y] + vw = Id exact in floating point
    point = collision_point("coll2b", x1, 0.25, -0.75)
    assert relation_residual(point, (-2.0, 1.0)) <= 1e-15


def test_shape_validation():
    point = zero_point(framed_cyclic(1, 1).quiver, (1, 2))
    with pytest.raises(RepShapeError):
        point.with_mats({"x0": np.zeros((3, 3))})
    with pytest.raises(RepShapeError):
        point.with_mats({"y7": np.zeros((2, 2))})


def test_trace_words(rng):
    point = _random_jordan_point(rng)
    quiver = point.quiver
    word = TraceWord.parse(quiver, "tr:X,Y,Y")
    assert word.letters == ("x0", "x0*", "x0*")
    X, Y = point.mat("x0"), point.mat("x0*")
    np.testing.assert_allclose(trace_word(point, word), np.trace(Y @ Y @ X))
    for shift in range(3):
        np.testing.assert_allclose(
            trace_word(point, word.rotate(shift)), trace_word(point, word)
        )
    assert trace_word(point, TraceWord.parse(quiver, "tr:1_0")) == 3
    assert str(TraceWord.parse(quiver, "tr:b0_1,x0*,b0_1*")) == "tr:b0_1,x0*,b0_1*"

    with pytest.raises(WordError):
        TraceWord(quiver, ("x0", "b0_1"))


def test_word_gradient_matches_finite_differences(rng):
    point = _random_jordan_point(rng)
    word = TraceWord.parse(point.quiver, "tr:X,Y,X,Y,Y")
    eps = 1e-6
    for edge_id in ["x0", "x0*"]:
        gradient = word_gradient(point, word, edge_id)
        direction = rng.normal(size=point.mat(edge_id).shape)
        plus = point.with_mats({edge_id: point.mat(edge_id) + eps * direction})
        minus = point.with_mats({edge_id: point.mat(edge_id) - eps * direction})
        numeric = (trace_word(plus, word) - trace_word(minus, word)) / (2 * eps)
        np.testing.assert_allclose(
            numeric, np.trace(gradient @ direction), rtol=1e-6, atol=1e-6
        )


def test_gauge_invariance_of_traces(rng):
    point = _random_jordan_point(rng)
    moved = gauge_act(random_gauge(point, rng), point)
    for text in ["tr:X,Y", "tr:Y,Y,Y", "tr:b0_1,x0*,b0_1*"]:
        word = TraceWord.parse(point.quiver, text)
        np.testing.assert_allclose(
            trace_word(moved, word), trace_word(point, word), rtol=1e-10
        )


def test_poisson_bracket_conventions(rng):
    point = _random_jordan_point(rng)
    quiver = point.quiver
    Y = point.mat("x0*")
    for k in [1, 2, 3]:
        word = TraceWord.parse(quiver, "tr:" + ",".join("Y" * k))
        hamiltonian = TracePolynomial.word(word)
        field = hamiltonian_vector_field(point, hamiltonian)
        np.testing.assert_allclose(
            field["x0"], -k * np.linalg.matrix_power(Y, k - 1), atol=1e-12
        )
        np.testing.assert_allclose(field["x0*"], 0, atol=1e-12)

    f = TracePolynomial.word(TraceWord.parse(quiver, "tr:X,Y"))
    g = TracePolynomial.word(TraceWord.parse(quiver, "tr:X,X")) * f
    np.testing.assert_allclose(
        poisson_bracket(point, f, g), -poisson_bracket(point, g, f), atol=1e-10
    )
    y2 = TracePolynomial.word(TraceWord.parse(quiver, "tr:Y,Y"))
    y3 = TracePolynomial.word(TraceWord.parse(quiver, "tr:Y,Y,Y"))
    assert abs(poisson_bracket(point, y2, y3)) <= 1e-12


def test_moment_hamiltonians_close_under_brackets(rng):
    point = _random_jordan_point(rng, n=2, d=2)
    dims = dict(zip(point.quiver.vertices, point.dims, strict=True))

    def family():
        return {
            v: rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            for v, d in dims.items()
        }

    theta, eta = family(), family()
    bracket = poisson_bracket(point, MomentHamiltonian(theta), MomentHamiltonian(eta))
    expected = MomentHamiltonian(theta_commutator(theta, eta)).value(point)
    np.testing.assert_allclose(bracket, expected, rtol=1e-10, atol=1e-10)


def test_simplicity():
    point = zero_point(framed_cyclic(1, 1).quiver, (1, 1))
    assert generated_algebra_dimension(point) == 2
    assert not is_simple(point)

    assert not is_simple(point, lam=(0.0, 0.0))


def test_simplicity_needs_an_on_shell_point(rng):
    with pytest.raises(OffShellPointError):
        is_simple(_random_jordan_point(rng))
    point = collision_point("coll2a", 0.5, 0.25, -0.75)
    assert is_simple(point, lam=(-2.0, 1.0))
    with pytest.raises(OffShellPointError):
        is_simple(point, lam=(-2.0, 2.0))
