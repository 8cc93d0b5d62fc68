"""Rational functions of x kept in partial-fraction form.

    f(x) = sum_i c_i x^i + sum_z sum_k a_{z,k} (x - z)^{-k}

The polynomial part is stored by ascending degree and every pole carries its
principal part a_{z,1}, a_{z,2}, ... Products are computed from Laurent
expansions at the poles and at infinity, so derivatives and the substitutions
x -> s x never go through polynomial roots.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.signal
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly
from scipy.special import comb

from quiverflow.config import get_config
from quiverflow.logger import get_logger

logger = get_logger(__name__)

Pole = tuple[complex, np.ndarray]
RESIDUE_TOL = 1e-6


class ZeroDivisionRationalError(ValueError):
    pass


class DegreeCapError(ValueError):
    pass


def _array(values) -> np.ndarray:
    return np.atleast_1d(np.asarray(values, dtype=complex)).ravel()


def _pad_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] += b
    return out


def _trim(coefs: np.ndarray, threshold: float) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(coefs) > threshold)
    if nonzero.size == 0:
        return np.zeros(0, dtype=complex)
    return coefs[: nonzero[-1] + 1]


def _same_pole(z: complex, other: complex) -> bool:
    return abs(z - other) <= get_config().tolerances.merge * max(1.0, abs(z))


def _pole_taylor(z: complex, coefs: np.ndarray, at: complex, order: int) -> np.ndarray:
    """Taylor coefficients at `at` of sum_k coefs[k-1] (x - z)^{-k}, at != z."""
    h = at - z
    k = np.arange(1, coefs.size + 1)[:, None]
    s = np.arange(order)[None, :]
    table = comb(k + s - 1, s) * (-1.0) ** s / h ** (k + s)
    return coefs @ table


def _poly_taylor(poly: np.ndarray, at: complex, order: int) -> np.ndarray:
    """Coefficients of P(u + at) in u, truncated to `order` terms."""
    out = np.zeros(order, dtype=complex)
    if poly.size == 0 or order == 0:
        return out
    i = np.arange(poly.size)[:, None]
    s = np.arange(min(order, poly.size))[None, :]
    exponent = np.clip(i - s, 0, None)
    table = np.where(i >= s, comb(i, s) * np.power(complex(at), exponent), 0)
    out[: s.size] = poly @ table
    return out


def _infinity_expansion(poles: Sequence[Pole], count: int) -> np.ndarray:
    """r_1..r_count with sum of principal parts = sum_s r_s x^{-s}."""
    out = np.zeros(count, dtype=complex)
    if count == 0:
        return out
    s = np.arange(1, count + 1)[None, :]
    for z, coefs in poles:
        k = np.arange(1, coefs.size + 1)[:, None]
        exponent = np.clip(s - k, 0, None)
        table = np.where(s >= k, comb(s - 1, k - 1) * np.power(z, exponent), 0)
        out += coefs @ table
    return out


def _polynomial_part(poly: np.ndarray, poles: Sequence[Pole]) -> np.ndarray:
    """Polynomial part of P(x) times a sum of principal parts."""
    degree = poly.size - 1
    if degree < 1 or not poles:
        return np.zeros(0, dtype=complex)
    r = _infinity_expansion(poles, degree)
    return np.array(
        [poly[e + 1 :] @ r[: degree - e] for e in range(degree)], dtype=complex
    )


@dataclass(frozen=True, eq=False)
class RationalFunction:
    poly: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    poles: tuple[Pole, ...] = ()

    def __post_init__(self):
        config = get_config()
        merged: list[list] = []
        for z, coefs in self.poles:
            z, coefs = complex(z), _array(coefs)
            for entry in merged:
                if _same_pole(entry[0], z):
                    entry[1] = _pad_add(entry[1], coefs)
                    break
            else:
                merged.append([z, coefs])
        poly = _array(self.poly)
        scale = max(
            [float(np.abs(poly).max(initial=0.0))]
            + [float(np.abs(c).max(initial=0.0)) for _, c in merged]
        )
        threshold = config.tolerances.prune * max(1.0, scale)
        poly = _trim(poly, threshold)
        poles = []
        for z, coefs in merged:
            coefs = _trim(coefs, threshold)
            if coefs.size:
                poles.append((z, coefs))
        total_order = sum(c.size for _, c in poles)
        if poly.size - 1 > config.degree_cap or total_order > config.degree_cap:
            error_msg = (
                f"Rational function exceeds the degree cap {config.degree_cap} "
                f"(degree {poly.size - 1}, pole order {total_order})."
            )
            logger.error(error_msg)
            raise DegreeCapError(error_msg)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "poles", tuple(poles))

    @classmethod
    def constant(cls, value: complex) -> "RationalFunction":
        return cls(np.array([value], dtype=complex))

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls()

    @classmethod
    def polynomial(cls, coefs: Sequence[complex]) -> "RationalFunction":
        """From ascending coefficients."""
        return cls(_array(coefs))

    @classmethod
    def monomial(cls, power: int, coef: complex = 1.0) -> "RationalFunction":
        if power >= 0:
            poly = np.zeros(power + 1, dtype=complex)
            poly[power] = coef
            return cls(poly)
        return cls.pole(0.0, -power, coef)

    @classmethod
    def pole(
        cls, z: complex, order: int = 1, coef: complex = 1.0
    ) -> "RationalFunction":
        """coef / (x - z)^order."""
        coefs = np.zeros(order, dtype=complex)
        coefs[order - 1] = coef
        return cls(poles=((z, coefs),))

    @classmethod
    def from_fraction(
        cls, numerator: Sequence[complex], denominator: Sequence[complex]
    ) -> "RationalFunction":
        """From ascending numerator and denominator coefficients."""
        num, den = _array(numerator), _trim(_array(denominator), 0.0)
        if den.size == 0:
            error_msg = "Denominator is the zero polynomial."
            logger.error(error_msg)
            raise ZeroDivisionRationalError(error_msg)
        num = _trim(num, 0.0)
        if num.size == 0:
            return cls()
        if den.size == 1:
            return cls(num / den[0])
        if not np.any(den[:-1]):
            # c x^k: scipy finds real-typed roots here and drops imaginary parts
            k, c = den.size - 1, den[-1]
            head = np.zeros(k, dtype=complex)
            head[: min(k, num.size)] = num[:k]
            return cls(num[k:] / c, ((0.0, head[::-1] / c),))
        residues, roots, direct = scipy.signal.residue(
            num[::-1], den[::-1], tol=RESIDUE_TOL, rtype="avg"
        )
        poles: list[Pole] = []
        index = 0
        while index < roots.size:
            z = roots[index]
            stop = index + 1
            while stop < roots.size and _same_pole(z, roots[stop]):
                stop += 1
            poles.append((complex(z), np.asarray(residues[index:stop], dtype=complex)))
            index = stop
        return cls(np.asarray(direct, dtype=complex)[::-1], tuple(poles))

    @property
    def is_zero(self) -> bool:
        return self.poly.size == 0 and not self.poles

    @property
    def degree(self) -> int:
        """Degree of the polynomial part, -1 when there is none."""
        return self.poly.size - 1

    @property
    def pole_locations(self) -> np.ndarray:
        return np.array([z for z, _ in self.poles], dtype=complex)

    @property
    def denominator(self) -> Polynomial:
        """Monic prod (x - z)^{K_z}."""
        roots = [z for z, c in self.poles for _ in range(c.size)]
        return Polynomial.fromroots(roots) if roots else Polynomial([1.0 + 0j])

    @property
    def numerator(self) -> Polynomial:
        denominator = self.denominator
        total = Polynomial(self.poly if self.poly.size else [0j]) * denominator
        for z, coefs in self.poles:
            others = [w for w, c in self.poles if w != z for _ in range(c.size)]
            for k, a in enumerate(coefs, start=1):
                rest = others + [z] * (coefs.size - k)
                factor = Polynomial.fromroots(rest) if rest else Polynomial([1.0 + 0j])
                total = total + a * factor
        return total

    def norm(self) -> float:
        """Largest coefficient modulus."""
        return max(
            [float(np.abs(self.poly).max(initial=0.0))]
            + [float(np.abs(c).max()) for _, c in self.poles]
        )

    def principal(self, z: complex) -> np.ndarray:
        for w, coefs in self.poles:
            if _same_pole(w, z):
                return coefs
        return np.zeros(0, dtype=complex)

    def regular_taylor(self, at: complex, order: int) -> np.ndarray:
        """Taylor coefficients at `at` of f minus its principal part there."""
        out = _poly_taylor(self.poly, at, order)
        if order == 0:
            return out
        for z, coefs in self.poles:
            if not _same_pole(z, at):
                out = out + _pole_taylor(z, coefs, at, order)
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        value = npoly.polyval(x, self.poly) if self.poly.size else np.zeros_like(x)
        for z, coefs in self.poles:
            u = 1.0 / (x - z)
            value = value + npoly.polyval(u, np.concatenate([[0.0], coefs]))
        return value

    def __neg__(self) -> "RationalFunction":
        return self.scale(-1.0)

    def scale(self, factor: complex) -> "RationalFunction":
        if factor == 0:
            return RationalFunction()
        return RationalFunction(
            self.poly * factor, tuple((z, c * factor) for z, c in self.poles)
        )

    def __add__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        return RationalFunction(
            _pad_add(self.poly, other.poly), self.poles + other.poles
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return _multiply(self, other)
        return self.scale(complex(other))

    def __rmul__(self, other) -> "RationalFunction":
        return self.scale(complex(other))

    def __truediv__(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return _multiply(self, other.reciprocal())
        if other == 0:
            error_msg = "Division of a rational function by zero."
            logger.error(error_msg)
            raise ZeroDivisionRationalError(error_msg)
        return self.scale(1.0 / complex(other))

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            error_msg = "The zero rational function has no inverse."
            logger.error(error_msg)
            raise ZeroDivisionRationalError(error_msg)
        return RationalFunction.from_fraction(
            self.denominator.coef, self.numerator.coef
        )

    def derivative(self) -> "RationalFunction":
        poly = npoly.polyder(self.poly) if self.poly.size > 1 else np.zeros(0)
        poles = []
        for z, coefs in self.poles:
            orders = np.arange(1, coefs.size + 1)
            poles.append((z, np.concatenate([[0.0], -orders * coefs])))
        return RationalFunction(poly, tuple(poles))

    def scaled(self, s: complex) -> "RationalFunction":
        """x -> f(s x) for s != 0."""
        s = complex(s)
        if s == 1:
            return self
        poly = self.poly * s ** np.arange(self.poly.size)
        poles = tuple(
            (z / s, coefs * s ** -np.arange(1, coefs.size + 1))
            for z, coefs in self.poles
        )
        return RationalFunction(poly, poles)


def _multiply(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    if f.is_zero or g.is_zero:
        return RationalFunction()
    if not f.poles and not g.poles:
        return RationalFunction(npoly.polymul(f.poly, g.poly))
    poly = npoly.polymul(f.poly, g.poly) if f.poly.size and g.poly.size else []
    poly = _pad_add(_array(poly), _polynomial_part(f.poly, g.poles))
    poly = _pad_add(poly, _polynomial_part(g.poly, f.poles))
    locations: list[complex] = []
    for z, _ in f.poles + g.poles:
        if not any(_same_pole(w, z) for w in locations):
            locations.append(z)
    poles = []
    for z in locations:
        f_neg, g_neg = f.principal(z), g.principal(z)
        f_tay = f.regular_taylor(z, g_neg.size) if g_neg.size else f_neg[:0]
        g_tay = g.regular_taylor(z, f_neg.size) if f_neg.size else g_neg[:0]
        part = np.zeros(f_neg.size + g_neg.size, dtype=complex)
        if f_neg.size and g_neg.size:
            product = np.convolve(f_neg, g_neg)
            part[1 : 1 + product.size] += product
        for s, t in enumerate(g_tay):
            part[: f_neg.size - s] += f_neg[s:] * t
        for s, t in enumerate(f_tay):
            part[: g_neg.size - s] += g_neg[s:] * t
        poles.append((z, part))
    return RationalFunction(poly, tuple(poles))


def combine(terms: Iterable[tuple[complex, RationalFunction]]) -> RationalFunction:
    """sum of coef * f over the given pairs, normalized once."""
    poly = np.zeros(0, dtype=complex)
    poles: list[Pole] = []
    for coef, f in terms:
        if coef == 0 or f.is_zero:
            continue
        poly = _pad_add(poly, coef * f.poly)
        poles.extend((z, coef * c) for z, c in f.poles)
    return RationalFunction(poly, tuple(poles))


RationalOp = Literal["add", "sub", "mul", "div", "derivative", "eval"]


def rf_arith(f: RationalFunction, g, op: RationalOp):
    """Field operations, formal d/dx and evaluation; g is a point for eval."""
    match op:
        case "add":
            return f + g
        case "sub":
            return f - g
        case "mul":
            return f * g
        case "div":
            return f / g
        case "derivative":
            return f.derivative()
        case "eval":
            return f(g)
    error_msg = f"Unknown operation {op!r}."
    logger.error(error_msg)
    raise ValueError(error_msg)


def sample_points(
    poles: Iterable[complex],
    count: int,
    rng: np.random.Generator,
    exclusion: float = 0.25,
) -> np.ndarray:
    """Random points of a disc around the poles, each kept `exclusion` away."""
    poles = np.asarray(list(poles), dtype=complex)
    radius = 1.0 + 2.0 * float(np.abs(poles).max(initial=0.0))
    points: list[complex] = []
    for _ in range(1000):
        batch = radius * np.sqrt(rng.uniform(size=count)) * np.exp(
            2j * np.pi * rng.uniform(size=count)
        )
        for x in batch:
            if poles.size == 0 or np.abs(poles - x).min() > exclusion:
                points.append(complex(x))
        if len(points) >= count:
            return np.array(points[:count])
    error_msg = f"No {count} points at distance {exclusion} from the poles."
    logger.error(error_msg)
    raise ValueError(error_msg)
