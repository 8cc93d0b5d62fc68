from math import factorial

import numpy as np
import pytest

from quiverflow.operator_algebra import (
    CherednikAlgebra,
    CrossedElement,
    DegreeCapError,
    HBarElement,
    MatrixOperator,
    NotUnitriangularError,
    RationalFunction,
    WindowError,
    ZeroDivisionRationalError,
    binomial,
    check_unitriangular,
    coefficient_gap,
    comm_y,
    commutator,
    crossed_mul,
    dunkl,
    hbar_mul,
    invert_unitriangular,
    matrix_gap,
    matrix_mul,
    rf_arith,
    sample_points,
    split_pm,
    split_pm_matrix,
    weight_coefficients,
)
from quiverflow.utils.common import root_of_unity

LAM2 = (1.0, 0.5)


def _pole(a, order=1, coef=1.0):
    return RationalFunction.pole(a, order, coef)


def _x():
    return RationalFunction.monomial(1)


def test_rational_arithmetic(rng):
    f = _pole(1.0) + _x()
    g = _x()
    points = sample_points([0.0, 1.0], 6, rng)

    product = rf_arith(f, g, "mul")
    np.testing.assert_allclose(product.poly, [1, 0, 1], atol=1e-14)
    np.testing.assert_allclose(product.principal(1.0), [1], atol=1e-14)
    np.testing.assert_allclose(product(points), f(points) * g(points), rtol=1e-12)
    np.testing.assert_allclose(
        rf_arith(f, g, "div")(points), f(points) / g(points), rtol=1e-10
    )
    np.testing.assert_allclose(
        rf_arith(f, g, "add")(points), f(points) + g(points), rtol=1e-12
    )
    np.testing.assert_allclose(rf_arith(f, g, "sub")(points), 1 / (points - 1))
    np.testing.assert_allclose(
        rf_arith(f, None, "derivative")(points), 1 - 1 / (points - 1) ** 2, rtol=1e-12
    )
    np.testing.assert_allclose(rf_arith(f, 2.0, "eval"), 3.0)
    np.testing.assert_allclose(f.scaled(2.0)(points), f(2 * points), rtol=1e-12)

    square = _pole(1.0) * _pole(1.0)
    np.testing.assert_allclose(square.principal(1.0), [0, 1], atol=1e-14)
    assert (f - f).is_zero

    with pytest.raises(ValueError):
        rf_arith(f, g, "pow")


def test_rational_construction(rng):
    f = RationalFunction.from_fraction([1, 0, 1], [-1, 0, 1])
    assert sorted(f.pole_locations.real.round(8)) == [-1.0, 1.0]
    np.testing.assert_allclose(f.principal(1.0), [1], atol=1e-10)
    np.testing.assert_allclose(f.principal(-1.0), [-1], atol=1e-10)
    points = sample_points(f.pole_locations, 5, rng)
    np.testing.assert_allclose(f(points), (points**2 + 1) / (points**2 - 1), rtol=1e-10)
    np.testing.assert_allclose(f.numerator(points) / f.denominator(points), f(points))

    merged = _pole(1.0) + _pole(1.0 + 1e-12)
    assert len(merged.poles) == 1
    np.testing.assert_allclose(merged.principal(1.0), [2])

    with pytest.raises(ZeroDivisionRationalError):
        RationalFunction.zero().reciprocal()
    with pytest.raises(ZeroDivisionRationalError):
        f / 0
    with pytest.raises(ZeroDivisionRationalError):
        RationalFunction.from_fraction([1], [0, 0])
    with pytest.raises(DegreeCapError):
        RationalFunction.monomial(65)

    # (i + 2x) / (i x^2) = x^{-2} - 2i x^{-1}
    monomial_den = RationalFunction.from_fraction([1j, 2], [0, 0, 1j])
    np.testing.assert_allclose(monomial_den.principal(0.0), [-2j, 1])
    assert monomial_den.poly.size == 0
    inverse = RationalFunction.polynomial([0, 2j]).reciprocal()
    x = np.array([0.5, 1j])
    np.testing.assert_allclose(inverse(x), 1 / (2j * x))

    points = sample_points([0.0, 1.0], 20, rng)
    assert np.abs(points).min() > 0.25
    assert np.abs(points - 1).min() > 0.25


def test_weight_coefficients():
    assert weight_coefficients((2.0,)) == (2.0,)
    np.testing.assert_allclose(weight_coefficients(LAM2), [0.75, 0.25])


def test_crossed_idempotents():
    m = 4
    units = [CrossedElement.idempotent(k, m) for k in range(m)]
    for i, e_i in enumerate(units):
        for j, e_j in enumerate(units):
            expected = e_i if i == j else CrossedElement.zero(m)
            assert (crossed_mul(e_i, e_j) - expected).norm() <= 1e-12, (i, j)
    total = units[0] + units[1] + units[2] + units[3]
    assert (total - CrossedElement.one(m)).norm() <= 1e-12


def test_crossed_commutation():
    m = 3
    x = CrossedElement.x(m)
    for i in range(m):
        left = CrossedElement.idempotent(i, m) * x
        right = x * CrossedElement.idempotent(i + 1, m)
        assert (left - right).norm() <= 1e-12, i

    moved = CrossedElement.sigma(m) * x
    assert moved.parts[0].is_zero
    np.testing.assert_allclose(moved.parts[1](1.0), root_of_unity(m) ** -1)

    with pytest.raises(ValueError):
        CrossedElement(())
    with pytest.raises(ValueError):
        CrossedElement.one(2) + CrossedElement.one(3)


def test_comm_y():
    bracket = comm_y(RationalFunction.monomial(2), (1.0,))
    np.testing.assert_allclose(bracket.parts[0].poly, [0, 2])

    # [y, x] = lambda_0 e_0 + lambda_1 e_1
    bracket = comm_y(_x(), LAM2)
    expected = CrossedElement.weight_element(LAM2)
    assert (bracket - expected).norm() <= 1e-14

    bracket = comm_y(RationalFunction.monomial(2), LAM2)
    np.testing.assert_allclose(bracket.parts[0].poly, [0, sum(LAM2)])
    assert bracket.parts[1].is_zero

    assert comm_y(3.0, LAM2).is_zero


@pytest.mark.parametrize("j", [1, 2])
def test_dunkl_difference_quotient(rng, j):
    m, a = 3, 0.4 + 0.7j
    f = _pole(a) + RationalFunction.monomial(2)
    s = root_of_unity(m) ** -j
    quotient = dunkl(f, j, m)
    points = sample_points(list(quotient.pole_locations) + [0.0], 6, rng)
    expected = (f(points) - f(s * points)) / ((1 - s) * points)
    np.testing.assert_allclose(quotient(points), expected, rtol=1e-10)


@pytest.mark.parametrize("lam", [(1.0,), LAM2])
def test_y_x_commutator(lam):
    alg = CherednikAlgebra(lam, -4, 3)
    y, x = HBarElement.y(alg), HBarElement.x(alg)
    difference = y * x - x * y
    assert set(difference.terms) == {0}
    assert (difference.coefficient(0) - alg.c()).norm() <= 1e-14


@pytest.mark.parametrize("s", range(6))
def test_binomial_of_negative_powers(s):
    assert binomial(-1, s) == (-1) ** s
    assert binomial(-2, s) == (-1) ** s * (s + 1)
    assert binomial(s, s) == 1
    assert binomial(s + 2, 2) == (s + 2) * (s + 1) // 2
    assert binomial(s, s + 1) == 0


def test_inverse_derivative_of_x():
    # d^{-1} x = x d^{-1} - d^{-2}
    alg = CherednikAlgebra((1.0,), -6, 2)
    product = HBarElement.y(alg, -1) * HBarElement.x(alg)
    assert set(product.terms) == {-1, -2}
    np.testing.assert_allclose(product.coefficient(-1).parts[0].poly, [0, 1])
    np.testing.assert_allclose(product.coefficient(-2).parts[0].poly, [-1])
    assert not product.truncated


@pytest.mark.parametrize("lam", [1.0, 0.5])
def test_pseudo_differential_leibniz_rule(rng, lam):
    # (lam d)^{-2} f = sum_s lam^s (s + 1)! (x - a)^{-s-1} (lam d)^{-2-s}
    a = 0.3 - 0.2j
    alg = CherednikAlgebra((lam,), -6, 2)
    product = HBarElement.y(alg, -2) * HBarElement.constant(alg, _pole(a))
    assert product.truncated
    points = sample_points([a], 5, rng)
    for s in range(5):
        coefficient = product.coefficient(-2 - s).parts[0]
        expected = lam**s * factorial(s + 1) / (points - a) ** (s + 1)
        np.testing.assert_allclose(coefficient(points), expected, rtol=1e-10)


def test_y_inverse_cancels(rng):
    alg = CherednikAlgebra(LAM2, -6, 3)
    x = HBarElement.x(alg)
    y, y_inv = HBarElement.y(alg), HBarElement.y(alg, -1)
    assert (y * y_inv - HBarElement.one(alg)).is_zero
    back = hbar_mul(y_inv, hbar_mul(y, x))
    assert not back.truncated
    points = sample_points([0.0], 5, rng)
    assert coefficient_gap(back, x, points) <= 1e-12
    back = y * (y_inv * x)
    assert coefficient_gap(back, x, points) <= 1e-12


@pytest.mark.parametrize("lam", [LAM2, (1.0, -0.4, 0.7)])
def test_associativity(rng, lam):
    alg = CherednikAlgebra(lam, -5, 4)
    x, y = HBarElement.x(alg), HBarElement.y(alg)
    y_inv = HBarElement.y(alg, -1)
    pole = HBarElement.constant(alg, _pole(3.0))
    A = x * y + pole
    B = y_inv * x + y
    C = x * x + y_inv
    left = (A * B) * C
    right = A * (B * C)
    poles = left.poles() | right.poles()
    points = sample_points(poles, 6, rng, exclusion=1.0)
    values = [np.abs(v).max() for v in left.evaluate(points).values()]
    scale = max([1.0, *values])
    assert coefficient_gap(left, right, points) <= 1e-9 * scale


def test_window_handling():
    with pytest.raises(WindowError):
        CherednikAlgebra((1.0,), 0, 3)
    alg = CherednikAlgebra((1.0,), -4, 4)
    with pytest.raises(WindowError):
        HBarElement.y(alg, 5)
    with pytest.raises(WindowError):
        HBarElement.y(alg, 3) * HBarElement.y(alg, 3)
    with pytest.raises(WindowError):
        HBarElement.one(alg) + HBarElement.one(alg.with_window(-3, 4))

    below = HBarElement(alg, {-10: CrossedElement.one(1)})
    assert below.is_zero
    assert below.truncated
    assert below.validity_floor == -4


def test_split_pm(rng):
    alg = CherednikAlgebra(LAM2, -6, 3)
    F = HBarElement.x(alg) * HBarElement.y(alg) + HBarElement.y(
        alg, -1, _pole(0.5 + 0.5j)
    )
    F = F + HBarElement.one(alg)
    plus, minus = split_pm(F)
    assert set(plus.terms) == {0, 1}
    assert set(minus.terms) == {-1}
    points = sample_points(F.poles(), 4, rng)
    assert coefficient_gap(plus + minus, F, points) == 0

    exact_top = HBarElement(alg, dict(F.terms), validity_floor=-2, truncated=True)
    assert not split_pm(exact_top)[0].truncated
    inexact = HBarElement(alg, dict(F.terms), validity_floor=1, truncated=True)
    assert split_pm(inexact)[0].truncated


def test_invert_unitriangular(rng):
    alg = CherednikAlgebra(LAM2, -6, 2)
    one = HBarElement.one(alg)
    M = one + HBarElement.y(alg, -1, _pole(0.8j)) + HBarElement.y(alg, -2, _x())
    inverse = invert_unitriangular(M)
    points = sample_points(inverse.poles() | M.poles(), 5, rng, exclusion=0.5)
    for product in [M * inverse, inverse * M]:
        values = [np.abs(v).max() for v in product.evaluate(points).values()]
        assert coefficient_gap(product, one, points) <= 1e-9 * max([1.0, *values])

    check_unitriangular(M)
    with pytest.raises(NotUnitriangularError):
        invert_unitriangular(M + HBarElement.y(alg))
    with pytest.raises(NotUnitriangularError):
        invert_unitriangular(M + one)


def test_invert_unitriangular_matrix(rng):
    alg = CherednikAlgebra(LAM2, -5, 2)
    zero = HBarElement.zero(alg)
    entries = (
        (HBarElement.y(alg, -1, _pole(1.5)), HBarElement.y(alg, -2, _x())),
        (HBarElement.y(alg, -1, 0.7), zero),
    )
    M = MatrixOperator.identity(alg, 2) + MatrixOperator(entries)
    inverse = invert_unitriangular(M)
    identity = MatrixOperator.identity(alg, 2)
    points = sample_points(inverse.poles() | M.poles(), 5, rng, exclusion=0.5)
    product = matrix_mul(M, inverse)
    assert product.validity_floor == -5
    scale = max(
        [1.0]
        + [
            np.abs(v).max()
            for row in product.entries
            for e in row
            for v in e.evaluate(points).values()
        ]
    )
    assert matrix_gap(product, identity, points) <= 1e-9 * scale

    one = HBarElement.one(alg)
    bad = MatrixOperator(((one, one), (zero, one)))
    with pytest.raises(NotUnitriangularError):
        invert_unitriangular(bad)


def test_matrix_operators(rng):
    alg = CherednikAlgebra(LAM2, -4, 3)
    first, second = MatrixOperator.unit(alg, 2, 1), MatrixOperator.unit(alg, 2, 2)
    assert matrix_mul(first, second).entry(0, 0).is_zero
    lax = MatrixOperator.scaled_y(alg, [1.0, 2.0])
    bracket = commutator(lax, first)
    assert all(e.is_zero for row in bracket.entries for e in row)

    plus, minus = split_pm_matrix(
        lax + MatrixOperator.constant(alg, np.ones((2, 2))) * CrossedElement.one(2)
    )
    assert plus.entry(0, 0).order == 1
    assert all(e.is_zero for row in minus.entries for e in row)

    with pytest.raises(ValueError):
        MatrixOperator(())
    with pytest.raises(ValueError):
        first + MatrixOperator.identity(alg, 3)
