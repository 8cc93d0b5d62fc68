"""The crossed product C(x) # Z/m: sums f_0(x) + f_1(x) s + ... + f_{m-1}(x) s^{m-1}.

s acts by s x = mu^{-1} x s with mu = exp(2 pi i / m), so that

    (f s^i)(g s^j) = f(x) g(mu^{-i} x) s^{i+j}.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cache
from numbers import Number

import numpy as np

from quiverflow.logger import get_logger
from quiverflow.operator_algebra._rational import RationalFunction, combine
from quiverflow.utils.common import root_of_unity

logger = get_logger(__name__)


def _as_rational(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(complex(value))


@dataclass(frozen=True, eq=False)
class CrossedElement:
    parts: tuple[RationalFunction, ...]

    def __post_init__(self):
        if not self.parts:
            error_msg = "A crossed element needs m >= 1 parts."
            logger.error(error_msg)
            raise ValueError(error_msg)
        object.__setattr__(self, "parts", tuple(_as_rational(p) for p in self.parts))

    @property
    def m(self) -> int:
        return len(self.parts)

    @classmethod
    def zero(cls, m: int) -> "CrossedElement":
        return cls((RationalFunction(),) * m)

    @classmethod
    def scalar(cls, m: int, f) -> "CrossedElement":
        """f(x) s^0."""
        return cls((_as_rational(f),) + (RationalFunction(),) * (m - 1))

    @classmethod
    def one(cls, m: int) -> "CrossedElement":
        return cls.scalar(m, 1.0)

    @classmethod
    def x(cls, m: int) -> "CrossedElement":
        return cls.scalar(m, RationalFunction.monomial(1))

    @classmethod
    def sigma(cls, m: int, power: int = 1) -> "CrossedElement":
        parts = [RationalFunction()] * m
        parts[power % m] = RationalFunction.constant(1.0)
        return cls(tuple(parts))

    @classmethod
    def from_group_coefficients(cls, coefs: Sequence[complex]) -> "CrossedElement":
        """sum_j coefs[j] s^j with constant coefficients."""
        return cls(tuple(RationalFunction.constant(c) for c in coefs))

    @classmethod
    def idempotent(cls, k: int, m: int) -> "CrossedElement":
        """e_k = (1/m) sum_j mu^{-kj} s^j."""
        return cls.from_group_coefficients(_idempotent_coefficients(k % m, m))

    @classmethod
    def weight_element(cls, lam: Sequence[complex]) -> "CrossedElement":
        """c = sum_k lambda_k e_k."""
        return cls.from_group_coefficients(weight_coefficients(lam))

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.parts)

    def norm(self) -> float:
        return max(p.norm() for p in self.parts)

    def poles(self) -> set[complex]:
        return {z for p in self.parts for z in p.pole_locations}

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values of every f_j at the points, shape (m, len(points))."""
        return np.array([p(points) for p in self.parts])

    def _check(self, other: "CrossedElement") -> None:
        if other.m != self.m:
            error_msg = f"Crossed elements for m={self.m} and m={other.m} do not mix."
            logger.error(error_msg)
            raise ValueError(error_msg)

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        self._check(other)
        return CrossedElement(tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        self._check(other)
        return CrossedElement(tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self) -> "CrossedElement":
        return self.scale(-1.0)

    def scale(self, factor: complex) -> "CrossedElement":
        return CrossedElement(tuple(p.scale(factor) for p in self.parts))

    def __mul__(self, other) -> "CrossedElement":
        if isinstance(other, CrossedElement):
            return crossed_mul(self, other)
        if isinstance(other, RationalFunction):
            return crossed_mul(self, CrossedElement.scalar(self.m, other))
        if isinstance(other, Number):
            return self.scale(complex(other))
        return NotImplemented

    def __rmul__(self, other) -> "CrossedElement":
        if isinstance(other, RationalFunction):
            return crossed_mul(CrossedElement.scalar(self.m, other), self)
        if isinstance(other, Number):
            return self.scale(complex(other))
        return NotImplemented

    def twisted(self, power: int = 1) -> "CrossedElement":
        """sum_j mu^{-j power} f_j s^j.

        This is the coefficient change in y G = twisted(G) y + ...
        """
        if self.m == 1:
            return self
        mu = root_of_unity(self.m)
        return CrossedElement(
            tuple(p.scale(mu ** (-j * power)) for j, p in enumerate(self.parts))
        )

    def times_sigma(self, power: int) -> "CrossedElement":
        """Right multiplication by s^power."""
        m = self.m
        return CrossedElement(tuple(self.parts[(j - power) % m] for j in range(m)))


@cache
def _idempotent_coefficients(k: int, m: int) -> tuple[complex, ...]:
    mu = root_of_unity(m)
    return tuple(mu ** (-k * j) / m for j in range(m))


def weight_coefficients(lam: Sequence[complex]) -> tuple[complex, ...]:
    """c_j with sum_k lambda_k e_k = sum_j c_j s^j."""
    m = len(lam)
    mu = root_of_unity(m)
    return tuple(
        sum(complex(lam_k) * mu ** (-k * j) for k, lam_k in enumerate(lam)) / m
        for j in range(m)
    )


def crossed_mul(F: CrossedElement, G: CrossedElement) -> CrossedElement:
    """(f s^i)(g s^j) = f(x) g(mu^{-i} x) s^{i+j}."""
    F._check(G)
    m = F.m
    if m == 1:
        return CrossedElement((F.parts[0] * G.parts[0],))
    mu = root_of_unity(m)
    buckets: list[list[RationalFunction]] = [[] for _ in range(m)]
    for i, f in enumerate(F.parts):
        if f.is_zero:
            continue
        for j, g in enumerate(G.parts):
            if g.is_zero:
                continue
            buckets[(i + j) % m].append(f * g.scaled(mu ** (-i)))
    return CrossedElement(
        tuple(combine((1.0, term) for term in bucket) for bucket in buckets)
    )
