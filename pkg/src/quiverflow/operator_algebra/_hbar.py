"""Truncated elements of the localized Cherednik algebra of Z/m.

An element is F = sum_k F_k y^k with F_k in C(x) # Z/m and k in the order
window [low, high]. The generator y moves past coefficients by

    y G      = twisted(G) y + delta(G)
    y^{-1} G = sum_t (-1)^t twisted^{-1}(D^t G) y^{-1-t},   D = delta o twisted^{-1}

with delta(f s^j) = [y, f] s^j and [y, f] = sum_j c_j D_j(f) s^j, where
c = sum_k lambda_k e_k = sum_j c_j s^j, D_0 f = f' and, for j != 0,
D_j f = (f(x) - f(mu^{-j} x)) / ((1 - mu^{-j}) x). For m = 1 this is the
calculus of pseudo-differential operators in y = lambda d/dx.

Products below the window are dropped. Every element records the lowest
order from which its coefficients are exact (validity_floor); truncated
elements lose exactness at the bottom of a product, never silently.
"""

from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from numbers import Number

import numpy as np
from scipy.special import factorial, poch

from quiverflow.config import Window, get_config
from quiverflow.logger import get_logger
from quiverflow.operator_algebra._crossed import (
    CrossedElement,
    crossed_mul,
    weight_coefficients,
)
from quiverflow.operator_algebra._rational import RationalFunction, combine
from quiverflow.utils.common import root_of_unity

logger = get_logger(__name__)


class WindowError(ValueError):
    pass


class NotUnitriangularError(ValueError):
    pass


def binomial(k: int, s: int) -> float:
    """k (k - 1) ... (k - s + 1) / s!, for any integer k and s >= 0."""
    return float(poch(k - s + 1, s) / factorial(s, exact=True))


def dunkl(f: RationalFunction, j: int, m: int) -> RationalFunction:
    """D_j f: the derivative for j = 0, a difference quotient along mu^{-j} x else."""
    if j % m == 0:
        return f.derivative()
    s = root_of_unity(m) ** (-j)
    difference = f - f.scaled(s)
    return (difference * RationalFunction.pole(0.0)).scale(1.0 / (1.0 - s))


@dataclass(frozen=True)
class CherednikAlgebra:
    """Parameters of the algebra: lambda (one entry per vertex) and the window."""

    lam: tuple[complex, ...]
    low: int
    high: int

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(complex(v) for v in self.lam))
        if not self.lam:
            error_msg = "lambda needs at least one entry."
            logger.error(error_msg)
            raise ValueError(error_msg)
        if not self.low < 0 <= self.high:
            error_msg = f"Invalid window [{self.low}, {self.high}]."
            logger.error(error_msg)
            raise WindowError(error_msg)

    @classmethod
    def from_config(
        cls, lam: Sequence[complex], window: Window | None = None
    ) -> "CherednikAlgebra":
        window = get_config().window if window is None else window
        return cls(tuple(lam), window.low, window.high)

    def with_window(self, low: int, high: int) -> "CherednikAlgebra":
        return CherednikAlgebra(self.lam, low, high)

    @property
    def m(self) -> int:
        return len(self.lam)

    @property
    def depth(self) -> int:
        return -self.low

    @cached_property
    def c_coefficients(self) -> tuple[complex, ...]:
        return weight_coefficients(self.lam)

    def c(self) -> CrossedElement:
        return CrossedElement.from_group_coefficients(self.c_coefficients)

    def comm_y(self, f) -> CrossedElement:
        """[y, f(x)] = sum_j c_j D_j(f) s^j."""
        if not isinstance(f, RationalFunction):
            f = RationalFunction.constant(complex(f))
        m = self.m
        cutoff = 1e-15 * max(abs(v) for v in self.lam)
        parts = []
        for j, c_j in enumerate(self.c_coefficients):
            if abs(c_j) <= cutoff or f.is_zero:
                parts.append(RationalFunction())
            else:
                parts.append(dunkl(f, j, m).scale(c_j))
        return CrossedElement(tuple(parts))

    def delta(self, G: CrossedElement) -> CrossedElement:
        """y G - twisted(G) y = sum_j [y, g_j] s^j."""
        total = CrossedElement.zero(self.m)
        for j, g in enumerate(G.parts):
            if not g.is_zero:
                total = total + self.comm_y(g).times_sigma(j)
        return total


def _sum(elements: Sequence[CrossedElement], m: int) -> CrossedElement:
    if not elements:
        return CrossedElement.zero(m)
    if len(elements) == 1:
        return elements[0]
    return CrossedElement(
        tuple(combine((1.0, e.parts[j]) for e in elements) for j in range(m))
    )


@dataclass(frozen=True, eq=False)
class HBarElement:
    algebra: CherednikAlgebra
    terms: Mapping[int, CrossedElement] = field(default_factory=dict)
    validity_floor: int | None = None
    truncated: bool = False

    def __post_init__(self):
        alg = self.algebra
        terms, truncated = {}, self.truncated
        for k, coef in sorted(self.terms.items()):
            if coef.m != alg.m:
                error_msg = f"Coefficient at order {k} is for m={coef.m}, not {alg.m}."
                logger.error(error_msg)
                raise ValueError(error_msg)
            if coef.is_zero:
                continue
            if k > alg.high:
                error_msg = f"Order {k} exceeds the window top {alg.high}."
                logger.error(error_msg)
                raise WindowError(error_msg)
            if k < alg.low:
                truncated = True
                continue
            terms[k] = coef
        floor = alg.low
        if truncated and self.validity_floor is not None:
            floor = max(alg.low, self.validity_floor)
        if floor > alg.high:
            error_msg = f"Empty validity window: floor {floor} above {alg.high}."
            logger.error(error_msg)
            raise WindowError(error_msg)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "validity_floor", floor)
        object.__setattr__(self, "truncated", truncated)

    @classmethod
    def zero(cls, algebra: CherednikAlgebra) -> "HBarElement":
        return cls(algebra)

    @classmethod
    def constant(cls, algebra: CherednikAlgebra, value) -> "HBarElement":
        """An order 0 coefficient: a number, rational function or CrossedElement."""
        if not isinstance(value, CrossedElement):
            value = CrossedElement.scalar(algebra.m, value)
        return cls(algebra, {0: value})

    @classmethod
    def one(cls, algebra: CherednikAlgebra) -> "HBarElement":
        return cls.constant(algebra, 1.0)

    @classmethod
    def x(cls, algebra: CherednikAlgebra) -> "HBarElement":
        return cls.constant(algebra, RationalFunction.monomial(1))

    @classmethod
    def y(
        cls, algebra: CherednikAlgebra, power: int = 1, coefficient=1.0
    ) -> "HBarElement":
        """coefficient * y^power."""
        if not isinstance(coefficient, CrossedElement):
            coefficient = CrossedElement.scalar(algebra.m, coefficient)
        return cls(algebra, {power: coefficient})

    @property
    def m(self) -> int:
        return self.algebra.m

    @property
    def window(self) -> tuple[int, int]:
        return self.algebra.low, self.algebra.high

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int | None:
        """Highest order with a nonzero coefficient."""
        return max(self.terms) if self.terms else None

    def coefficient(self, k: int) -> CrossedElement:
        return self.terms.get(k, CrossedElement.zero(self.m))

    def poles(self) -> set[complex]:
        return {z for coef in self.terms.values() for z in coef.poles()}

    def norm(self) -> float:
        return max((c.norm() for c in self.terms.values()), default=0.0)

    def evaluate(self, points: np.ndarray) -> dict[int, np.ndarray]:
        return {k: coef.evaluate(points) for k, coef in self.terms.items()}

    def _check(self, other: "HBarElement") -> None:
        if other.algebra != self.algebra:
            error_msg = "Operators live in different algebras or windows."
            logger.error(error_msg)
            raise WindowError(error_msg)

    def _combine(self, other: "HBarElement", sign: float) -> "HBarElement":
        self._check(other)
        terms = dict(self.terms)
        for k, coef in other.terms.items():
            scaled = coef if sign == 1 else coef.scale(sign)
            terms[k] = terms[k] + scaled if k in terms else scaled
        floors = [e.validity_floor for e in (self, other) if e.truncated]
        return HBarElement(
            self.algebra,
            terms,
            max(floors, default=None),
            self.truncated or other.truncated,
        )

    def __add__(self, other: "HBarElement") -> "HBarElement":
        return self._combine(other, 1.0)

    def __sub__(self, other: "HBarElement") -> "HBarElement":
        return self._combine(other, -1.0)

    def __neg__(self) -> "HBarElement":
        return self.scale(-1.0)

    def scale(self, factor: complex) -> "HBarElement":
        return HBarElement(
            self.algebra,
            {k: c.scale(factor) for k, c in self.terms.items()},
            self.validity_floor,
            self.truncated,
        )

    def left_constant(self, coef: CrossedElement) -> "HBarElement":
        """coef * F, no reordering needed."""
        return HBarElement(
            self.algebra,
            {k: crossed_mul(coef, c) for k, c in self.terms.items()},
            self.validity_floor,
            self.truncated,
        )

    def __mul__(self, other) -> "HBarElement":
        if isinstance(other, HBarElement):
            return hbar_mul(self, other)
        if isinstance(other, CrossedElement | RationalFunction):
            return hbar_mul(self, HBarElement.constant(self.algebra, other))
        if isinstance(other, Number):
            return self.scale(complex(other))
        return NotImplemented

    def __rmul__(self, other) -> "HBarElement":
        if isinstance(other, RationalFunction):
            other = CrossedElement.scalar(self.m, other)
        if isinstance(other, CrossedElement):
            return self.left_constant(other)
        if isinstance(other, Number):
            return self.scale(complex(other))
        return NotImplemented


def _effective_top(F: HBarElement) -> int | None:
    """Highest order that may carry a nonzero coefficient, known or not."""
    candidates = []
    if F.terms:
        candidates.append(max(F.terms))
    if F.truncated:
        candidates.append(F.validity_floor - 1)
    return max(candidates, default=None)


def _y_times(
    alg: CherednikAlgebra, expansion: Mapping[int, CrossedElement]
) -> dict[int, CrossedElement]:
    """y * sum_s H_s y^s."""
    out: dict[int, list[CrossedElement]] = defaultdict(list)
    for s, H in expansion.items():
        out[s + 1].append(H.twisted(1))
        lower = alg.delta(H)
        if not lower.is_zero:
            out[s].append(lower)
    result = {s: _sum(parts, alg.m) for s, parts in out.items()}
    for s, coef in result.items():
        if s > alg.high and not coef.is_zero:
            error_msg = f"Product reaches order {s} above the window top {alg.high}."
            logger.error(error_msg)
            raise WindowError(error_msg)
    return result


def _y_inverse_times(
    alg: CherednikAlgebra, expansion: Mapping[int, CrossedElement]
) -> tuple[dict[int, CrossedElement], bool]:
    """y^{-1} * sum_s H_s y^s, and whether nonzero terms fell below the window."""
    out: dict[int, list[CrossedElement]] = defaultdict(list)
    lost = False
    for s, H in expansion.items():
        current, sign, t = H, 1.0, 0
        while True:
            order = s - 1 - t
            if order < alg.low:
                lost = lost or not current.is_zero
                break
            untwisted = current.twisted(-1)
            out[order].append(untwisted if sign == 1 else untwisted.scale(sign))
            current = alg.delta(untwisted)
            if current.is_zero:
                break
            t, sign = t + 1, -sign
    return {s: _sum(parts, alg.m) for s, parts in out.items()}, lost


def _pull_through_mul(
    F: HBarElement, G: HBarElement
) -> tuple[dict[int, list[CrossedElement]], bool]:
    """Sum_k F_k (y^k G) with y^k G built one power at a time."""
    alg = F.algebra
    result: dict[int, list[CrossedElement]] = defaultdict(list)
    lost = False

    def absorb(coef: CrossedElement, expansion: Mapping[int, CrossedElement]):
        for s, H in expansion.items():
            result[s].append(crossed_mul(coef, H))

    expansion, power = dict(G.terms), 0
    for k in sorted(k for k in F.terms if k >= 0):
        while power < k:
            expansion, power = _y_times(alg, expansion), power + 1
        absorb(F.terms[k], expansion)
    expansion, power = dict(G.terms), 0
    for k in sorted((k for k in F.terms if k < 0), reverse=True):
        while power > k:
            expansion, dropped = _y_inverse_times(alg, expansion)
            lost = lost or dropped
            power -= 1
        absorb(F.terms[k], expansion)
    return result, lost


def _binomial_mul(
    F: HBarElement, G: HBarElement
) -> tuple[dict[int, list[CrossedElement]], bool]:
    """m = 1: y^k g = sum_s binom(k, s) lambda^s g^{(s)} y^{k-s}."""
    alg = F.algebra
    lam = alg.lam[0]
    result: dict[int, list[CrossedElement]] = defaultdict(list)
    lost = False
    derivatives: dict[int, list[RationalFunction]] = {
        ell: [g.parts[0]] for ell, g in G.terms.items()
    }

    def derivative(ell: int, s: int) -> RationalFunction:
        chain = derivatives[ell]
        while len(chain) <= s:
            chain.append(chain[-1].derivative())
        return chain[s]

    for k, f in F.terms.items():
        for ell in G.terms:
            s = 0
            while True:
                order = k + ell - s
                if k >= 0 and s > k:
                    break
                g_s = derivative(ell, s)
                if g_s.is_zero:
                    break
                if order < alg.low:
                    lost = True
                    break
                if order > alg.high:
                    error_msg = (
                        f"Product reaches order {order} "
                        f"above the window top {alg.high}."
                    )
                    logger.error(error_msg)
                    raise WindowError(error_msg)
                weight = binomial(k, s) * lam**s
                result[order].append(CrossedElement((f.parts[0] * g_s.scale(weight),)))
                s += 1
    return result, lost


def hbar_mul(F: HBarElement, G: HBarElement) -> HBarElement:
    """F G truncated to the window, with the exact range recorded."""
    F._check(G)
    alg = F.algebra
    top_f, top_g = _effective_top(F), _effective_top(G)
    if top_f is None or top_g is None:
        return HBarElement.zero(alg)
    floor = alg.low
    if F.truncated:
        floor = max(floor, F.validity_floor + top_g)
    if G.truncated:
        floor = max(floor, top_f + G.validity_floor)
    if floor > alg.high:
        error_msg = f"Empty validity window: product exact only from order {floor}."
        logger.error(error_msg)
        raise WindowError(error_msg)
    if alg.m == 1:
        result, lost = _binomial_mul(F, G)
    else:
        result, lost = _pull_through_mul(F, G)
    terms = {k: _sum(parts, alg.m) for k, parts in result.items()}
    truncated = F.truncated or G.truncated or lost
    return HBarElement(alg, terms, floor if truncated else None, truncated)


def split_pm(F: HBarElement) -> tuple[HBarElement, HBarElement]:
    """(F_+, F_-): the orders >= 0 and the orders <= -1."""
    plus = {k: c for k, c in F.terms.items() if k >= 0}
    minus = {k: c for k, c in F.terms.items() if k < 0}
    plus_exact = not F.truncated or F.validity_floor <= 0
    return (
        HBarElement(
            F.algebra, plus, F.validity_floor, F.truncated and not plus_exact
        ),
        HBarElement(F.algebra, minus, F.validity_floor, F.truncated),
    )


def check_unitriangular(M: HBarElement, tol: float | None = None) -> None:
    tol = get_config().tolerances.residual if tol is None else tol
    positive = [k for k in M.terms if k > 0]
    if positive:
        error_msg = f"Expected no positive orders, found {positive}."
        logger.error(error_msg)
        raise NotUnitriangularError(error_msg)
    leading = M.coefficient(0) - CrossedElement.one(M.m)
    if leading.norm() > tol:
        error_msg = f"Order-0 coefficient differs from 1 by {leading.norm():.3e}."
        logger.error(error_msg)
        raise NotUnitriangularError(error_msg)


def neumann_inverse(M, one, depth: int):
    """sum_{s <= depth} (1 - M)^s in Horner form; (1 - M) has order <= -1."""
    nilpotent = one - M
    inverse = one
    for _ in range(depth):
        inverse = one + nilpotent * inverse
    return inverse


def invert_hbar(M: HBarElement) -> HBarElement:
    check_unitriangular(M)
    strict = HBarElement(
        M.algebra,
        {k: c for k, c in M.terms.items() if k < 0},
        M.validity_floor,
        M.truncated,
    )
    one = HBarElement.one(M.algebra)
    return neumann_inverse(one + strict, one, M.algebra.depth)


def coefficient_gap(
    F: HBarElement, G: HBarElement, points: np.ndarray, floor: int | None = None
) -> float:
    """Largest |F_k - G_k| at the sample points over orders both know exactly."""
    F._check(G)
    floor = F.algebra.low if floor is None else floor
    lowest = max(F.validity_floor, G.validity_floor, floor)
    gap = 0.0
    for k in set(F.terms) | set(G.terms):
        if k < lowest:
            continue
        difference = F.coefficient(k) - G.coefficient(k)
        if not difference.is_zero:
            gap = max(gap, float(np.abs(difference.evaluate(points)).max()))
    return gap
