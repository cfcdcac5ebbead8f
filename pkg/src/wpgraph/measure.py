"""Exact finitely supported measures on graph vertices.

Vertices are referred to by index into ``Graph.vertices``. All weights are
``fractions.Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import (
    BadParameterError,
    MassNotOneError,
    NegativeWeightError,
    SizeMismatchError,
    UnknownVertexError,
)


class SignedMass:
    """Sparse map vertex -> nonzero rational. Zero entries are never stored.

    Treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("_mass",)

    def __init__(self, weights: Mapping[int, object] = ()):
        mass = {}
        for k, v in sorted(dict(weights).items()):
            if not isinstance(v, Fraction):
                v = Fraction(v)
            if v:
                mass[int(k)] = v
        self._mass = mass

    def __getitem__(self, x: int) -> Fraction:
        return self._mass.get(x, Fraction(0))

    def __iter__(self) -> Iterator[int]:
        return iter(self._mass)

    def __len__(self) -> int:
        return len(self._mass)

    def items(self):
        return self._mass.items()

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self._mass)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._mass)

    def total(self) -> Fraction:
        return sum(self._mass.values(), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, SignedMass):
            return NotImplemented
        return self._mass == other._mass

    def __hash__(self):
        return hash(tuple(self._mass.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self._mass.items())
        return f"{type(self).__name__}({{{body}}})"

    def plus(self, *terms: tuple[int, object]) -> SignedMass:
        """Return ``self + sum(c * delta_x for x, c in terms)`` as a SignedMass."""
        out = dict(self._mass)
        for x, c in terms:
            out[x] = out.get(x, Fraction(0)) + Fraction(c)
        return SignedMass(out)


class Measure(SignedMass):
    """Probability measure with finite support: positive weights summing to 1."""

    __slots__ = ()

    def __init__(self, weights: Mapping[int, object] = ()):
        super().__init__(weights)
        for x, w in self._mass.items():
            if w < 0:
                raise NegativeWeightError(f"negative weight {w} at vertex {x}")
        total = self.total()
        if total != 1:
            raise MassNotOneError(total)

    def plus(self, *terms) -> Measure:
        return Measure(SignedMass.plus(self, *terms).as_dict())


def make_measure(weights: Mapping[int, object]) -> Measure:
    return Measure(weights)


def dirac(x: int, n: int | None = None) -> Measure:
    """Unit mass at vertex ``x``; ``n`` (vertex count) enables range checking."""
    if x < 0 or (n is not None and x >= n):
        raise UnknownVertexError(f"vertex index {x} out of range")
    return Measure({x: 1})


def check_on_graph(mu: SignedMass, n: int, error=UnknownVertexError) -> None:
    for x in mu:
        if not 0 <= x < n:
            raise error(f"vertex index {x} not in graph of {n} vertices")


def pushforward(psi: Sequence[int], mu: Measure, n: int | None = None) -> Measure:
    """(psi_# mu)(x) = mu(psi^{-1}(x)), i.e. the mass at y moves to psi[y]."""
    if n is not None and len(psi) != n:
        raise SizeMismatchError(f"permutation has length {len(psi)}, graph has {n} vertices")
    if mu.support and max(mu.support) >= len(psi):
        raise SizeMismatchError("measure support exceeds permutation length")
    return Measure({psi[y]: w for y, w in mu.items()})


def interpolate(mu: Measure, nu: Measure, s) -> Measure:
    """The convex combination (1 - s) mu + s nu."""
    s = Fraction(s)
    if not 0 <= s <= 1:
        raise BadParameterError(f"interpolation parameter {s} outside [0, 1]")
    out: dict[int, Fraction] = {}
    for x, w in mu.items():
        out[x] = (1 - s) * w
    for x, w in nu.items():
        out[x] = out.get(x, Fraction(0)) + s * w
    return Measure(out)


def difference(mu: SignedMass, nu: SignedMass) -> SignedMass:
    out = mu.as_dict()
    for x, w in nu.items():
        out[x] = out.get(x, Fraction(0)) - w
    return SignedMass(out)


def p_moment(mu: Measure, x_hat: int, p: int, d) -> Fraction:
    """Exact sum of rho(x, x_hat)**p * mu(x)."""
    n = d.shape[0]
    if not 0 <= x_hat < n:
        raise UnknownVertexError(f"vertex index {x_hat} out of range")
    check_on_graph(mu, n)
    return sum((int(d[x, x_hat]) ** p * w for x, w in mu.items()), Fraction(0))


def random_measure(rng, n: int, max_support: int = 5, max_denominator: int = 64) -> Measure:
    """Seeded random measure with small exact weights.

    The support is uniform over nonempty vertex subsets of size at most
    ``max_support``; weights are a random composition of a random integer
    D <= ``max_denominator`` into positive parts, divided by D.
    """
    top = min(max_support, n)
    k = rng.choices(range(1, top + 1), weights=[math.comb(n, j) for j in range(1, top + 1)])[0]
    support = sorted(rng.sample(range(n), k))
    total = rng.randint(k, max(k, max_denominator))
    cuts = sorted(rng.sample(range(1, total), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return Measure({x: Fraction(w, total) for x, w in zip(support, parts)})
