"""Canonical Poisson bracket of invariant functions on Rep(double quiver).

For a in Q the coordinates (V_a)_{kl} and (V_{a*})_{lk} are conjugate,
{(V_a)_{kl}, (V_{a*})_{lk}} = 1. Gradients G_a are taken with
df = sum_a tr(G_a dV_a), so

    {f, g} = sum_{a in Q} tr(G^f_a G^g_{a*}) - tr(G^f_{a*} G^g_a).
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from quiverflow.quiver_core import star
from quiverflow.rep_variety._point import RepPoint, moment_hamiltonian
from quiverflow.rep_variety._words import TraceWord, trace_word, word_gradient

Gradient = dict[str, np.ndarray]


class Observable(Protocol):
    def value(self, point: RepPoint) -> complex: ...

    def gradient(self, point: RepPoint) -> Gradient: ...


@dataclass(frozen=True)
class TracePolynomial:
    """sum_t c_t prod_j tr(w_{t,j}), a polynomial in trace words."""

    terms: tuple[tuple[complex, tuple[TraceWord, ...]], ...] = field(default=())

    @classmethod
    def word(cls, word: TraceWord, coef: complex = 1.0) -> "TracePolynomial":
        return cls(((coef, (word,)),))

    @classmethod
    def linear(
        cls, words: Sequence[tuple[complex, TraceWord]]
    ) -> "TracePolynomial":
        return cls(tuple((c, (w,)) for c, w in words if c != 0))

    def __add__(self, other: "TracePolynomial") -> "TracePolynomial":
        return TracePolynomial(self.terms + other.terms)

    def __mul__(self, other: "TracePolynomial | complex") -> "TracePolynomial":
        if isinstance(other, TracePolynomial):
            return TracePolynomial(
                tuple(
                    (c1 * c2, w1 + w2)
                    for c1, w1 in self.terms
                    for c2, w2 in other.terms
                )
            )
        return TracePolynomial(tuple((c * other, w) for c, w in self.terms))

    __rmul__ = __mul__

    def value(self, point: RepPoint) -> complex:
        total = 0j
        for coef, words in self.terms:
            total += coef * np.prod([trace_word(point, w) for w in words])
        return complex(total)

    def gradient(self, point: RepPoint) -> Gradient:
        gradient: Gradient = {}
        for coef, words in self.terms:
            values = [trace_word(point, w) for w in words]
            for j, word in enumerate(words):
                others = coef * np.prod(values[:j] + values[j + 1 :])
                for letter in set(word.letters):
                    g = others * word_gradient(point, word, letter)
                    gradient[letter] = gradient.get(letter, 0) + g
        return gradient


@dataclass(frozen=True)
class MomentHamiltonian:
    """H_theta = sum_i tr(P_i(V) theta_i) for a per-vertex matrix family theta."""

    theta: Mapping[str, np.ndarray]

    def value(self, point: RepPoint) -> complex:
        return moment_hamiltonian(point, self.theta)

    def gradient(self, point: RepPoint) -> Gradient:
        gradient: Gradient = {}
        quiver = point.quiver
        for edge in quiver.base_edges:
            a, a_star = edge.id, star(edge.id)
            theta_h = self.theta[edge.head]
            theta_t = self.theta[edge.tail]
            V_a, V_as = point.mat(a), point.mat(a_star)
            gradient[a] = V_as @ theta_h - theta_t @ V_as
            gradient[a_star] = theta_h @ V_a - V_a @ theta_t
        return gradient


def poisson_bracket(point: RepPoint, f: Observable, g: Observable) -> complex:
    """{f, g} at the point."""
    grad_f = f.gradient(point)
    grad_g = g.gradient(point)
    total = 0j
    for edge in point.quiver.base_edges:
        a, a_star = edge.id, star(edge.id)
        if a in grad_f and a_star in grad_g:
            total += np.trace(grad_f[a] @ grad_g[a_star])
        if a_star in grad_f and a in grad_g:
            total -= np.trace(grad_f[a_star] @ grad_g[a])
    return complex(total)


def hamiltonian_vector_field(point: RepPoint, hamiltonian: Observable) -> Gradient:
    """dV/dt = {H, V}: dV_a/dt = -G_{a*} and dV_{a*}/dt = G_a for a in Q."""
    grad = hamiltonian.gradient(point)
    field_ = {}
    for edge in point.quiver.base_edges:
        a, a_star = edge.id, star(edge.id)
        zero_a = np.zeros_like(point.mat(a))
        zero_as = np.zeros_like(point.mat(a_star))
        field_[a] = -grad[a_star] if a_star in grad else zero_a
        field_[a_star] = grad[a] if a in grad else zero_as
    return field_


def theta_commutator(
    theta: Mapping[str, np.ndarray], eta: Mapping[str, np.ndarray]
) -> dict[str, np.ndarray]:
    return {v: theta[v] @ eta[v] - eta[v] @ theta[v] for v in theta}
