"""Weyl groups of types A_n and C_n and the shapes of BGG complexes.

Weights are given by Dynkin labels (coordinates in the fundamental weight
basis) and may have entries in Q or Q(k). Internally they live in the
standard realizations:

* A_n: the sum-zero hyperplane of Q^{n+1}, simple roots e_i - e_{i+1};
  the Weyl group permutes coordinates.
* C_n: Q^n with simple roots e_i - e_{i+1} and 2e_n; the Weyl group acts
  by signed permutations.

A root is positive exactly when its first nonzero coordinate is positive.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exactfield import RatFunc, rf

__all__ = [
    "RootSystemData",
    "WeylElement",
    "WeylBoundExceeded",
    "root_system",
    "generate_weyl",
    "generate_identity",
    "simple_reflection",
    "compose",
    "minimal_coset_representatives",
    "dot_action",
    "bgg_shape",
    "BggShape",
    "regularity_check",
    "length_histogram",
]

DEFAULT_BOUND = 10 ** 4


class WeylBoundExceeded(ValueError):
    """The Weyl group is larger than the configured enumeration bound."""


def _dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _is_positive(v: Sequence) -> bool:
    for x in v:
        if x != 0:
            return x > 0
    return False


@dataclass(frozen=True)
class RootSystemData:
    type: str
    rank: int

    def __post_init__(self):
        if self.type not in ("A", "C"):
            raise ValueError(f"unsupported root system type {self.type!r}")
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def ambient_dim(self) -> int:
        return self.rank + 1 if self.type == "A" else self.rank

    def _e(self, i: int) -> tuple:
        return tuple(Fraction(1 if p == i else 0) for p in range(self.ambient_dim))

    @cached_property
    def simple_roots(self) -> tuple:
        n = self.rank
        roots = [tuple(a - b for a, b in zip(self._e(i), self._e(i + 1))) for i in range(n - 1)]
        if self.type == "A":
            roots.append(tuple(a - b for a, b in zip(self._e(n - 1), self._e(n))))
        else:
            roots.append(tuple(2 * x for x in self._e(n - 1)))
        return tuple(roots)

    @cached_property
    def positive_roots(self) -> tuple:
        d = self.ambient_dim
        out = []
        for i in range(d):
            for j in range(i + 1, d):
                out.append(tuple(a - b for a, b in zip(self._e(i), self._e(j))))
                if self.type == "C":
                    out.append(tuple(a + b for a, b in zip(self._e(i), self._e(j))))
            if self.type == "C":
                out.append(tuple(2 * x for x in self._e(i)))
        return tuple(out)

    @staticmethod
    def coroot(alpha: Sequence) -> tuple:
        n2 = _dot(alpha, alpha)
        return tuple(2 * a / n2 for a in alpha)

    @cached_property
    def cartan_matrix(self) -> tuple:
        s = self.simple_roots
        return tuple(tuple(_dot(a, self.coroot(b)) for b in s) for a in s)

    @cached_property
    def fundamental_weights(self) -> tuple:
        n = self.rank
        out = []
        for i in range(1, n + 1):
            w = [Fraction(1 if p < i else 0) for p in range(self.ambient_dim)]
            if self.type == "A":
                shift = Fraction(i, n + 1)
                w = [x - shift for x in w]
            out.append(tuple(w))
        return tuple(out)

    @cached_property
    def rho(self) -> tuple:
        acc = [Fraction(0)] * self.ambient_dim
        for a in self.positive_roots:
            acc = [x + y / 2 for x, y in zip(acc, a)]
        return tuple(acc)

    @property
    def weyl_order(self) -> int:
        if self.type == "A":
            return math.factorial(self.rank + 1)
        return 2 ** self.rank * math.factorial(self.rank)

    def from_dynkin(self, labels: Sequence) -> tuple:
        if len(labels) != self.rank:
            raise ValueError(f"expected {self.rank} Dynkin labels, got {len(labels)}")
        out = [rf(0)] * self.ambient_dim
        for lab, w in zip(labels, self.fundamental_weights):
            out = [x + rf(lab) * c for x, c in zip(out, w)]
        return tuple(out)

    def to_dynkin(self, v: Sequence) -> tuple:
        return tuple(_pair(v, self.coroot(a)) for a in self.simple_roots)


def _pair(v: Sequence, w: Sequence) -> RatFunc:
    acc = rf(0)
    for a, b in zip(v, w):
        if b != 0:
            acc = acc + rf(a) * b
    return acc


def root_system(type_: str, rank: int) -> RootSystemData:
    return RootSystemData(type_.upper(), rank)


@dataclass(frozen=True, order=True)
class WeylElement:
    """Signed permutation: e_p is sent to signs[p] * e_{perm[p]}."""

    length: int
    perm: tuple
    signs: tuple

    def act(self, v: Sequence) -> tuple:
        out = [None] * len(v)
        for p, (q, s) in enumerate(zip(self.perm, self.signs)):
            out[q] = v[p] if s > 0 else -v[p]
        return tuple(out)

    def inverse_act(self, v: Sequence) -> tuple:
        return tuple(v[q] if s > 0 else -v[q] for q, s in zip(self.perm, self.signs))

    @property
    def word(self) -> tuple:
        return tuple(s * (q + 1) for q, s in zip(self.perm, self.signs))

    def __str__(self):
        return "[" + " ".join(str(x) for x in self.word) + "]"


def _length(rs: RootSystemData, perm: tuple, signs: tuple) -> int:
    w = WeylElement(0, perm, signs)
    return sum(1 for a in rs.positive_roots if not _is_positive(w.act(a)))


def compose(rs: RootSystemData, w1: WeylElement, w2: WeylElement) -> WeylElement:
    """The element acting as w1 after w2."""
    perm = tuple(w1.perm[q] for q in w2.perm)
    signs = tuple(s2 * w1.signs[q] for q, s2 in zip(w2.perm, w2.signs))
    return WeylElement(_length(rs, perm, signs), perm, signs)


def generate_identity(rs: RootSystemData) -> WeylElement:
    d = rs.ambient_dim
    return WeylElement(0, tuple(range(d)), (1,) * d)


def simple_reflection(rs: RootSystemData, i: int) -> WeylElement:
    """Reflection in the i-th simple root (1-based)."""
    d = rs.ambient_dim
    perm = list(range(d))
    signs = [1] * d
    if rs.type == "C" and i == rs.rank:
        signs[d - 1] = -1
    else:
        perm[i - 1], perm[i] = i, i - 1
    return WeylElement(1, tuple(perm), tuple(signs))


def generate_weyl(rs: RootSystemData, bound: int = DEFAULT_BOUND) -> list[WeylElement]:
    """All Weyl group elements ordered by (length, signed one-line word)."""
    if rs.weyl_order > bound:
        raise WeylBoundExceeded(f"|W| = {rs.weyl_order} exceeds the bound {bound}")
    d = rs.ambient_dim
    sign_choices = [(1,) * d] if rs.type == "A" else list(itertools.product((1, -1), repeat=d))
    out = []
    for perm in itertools.permutations(range(d)):
        for signs in sign_choices:
            out.append(WeylElement(_length(rs, perm, signs), perm, signs))
    return sorted(out, key=lambda w: (w.length, w.word))


def length_histogram(elements: Iterable[WeylElement]) -> tuple:
    c = Counter(w.length for w in elements)
    return tuple(c[i] for i in range(max(c) + 1)) if c else ()


def dot_action(rs: RootSystemData, w: WeylElement, labels: Sequence) -> tuple:
    """Dynkin labels of w.lam = w(lam + rho) - rho."""
    v = rs.from_dynkin(labels)
    shifted = tuple(x + r for x, r in zip(v, rs.rho))
    image = w.act(shifted)
    return rs.to_dynkin(tuple(x - r for x, r in zip(image, rs.rho)))


def regularity_check(rs: RootSystemData, labels: Sequence) -> bool:
    v = tuple(x + r for x, r in zip(rs.from_dynkin(labels), rs.rho))
    return all(not _pair(v, rs.coroot(a)).is_zero() for a in rs.positive_roots)


def _is_dominant_integral(labels: Sequence) -> bool:
    for x in labels:
        x = rf(x)
        if not x.is_constant():
            return False
        c = x.constant_value()
        if c.denominator != 1 or c < 0:
            return False
    return True


def minimal_coset_representatives(rs: RootSystemData, parabolic: Iterable[int],
                                  elements: Sequence[WeylElement] | None = None) -> list[WeylElement]:
    """Minimal-length representatives of W_M \\ W (w^-1 keeps M's simple roots positive).

    ``parabolic`` lists 1-based indices of the simple roots of M.
    """
    elements = generate_weyl(rs) if elements is None else elements
    roots = [rs.simple_roots[i - 1] for i in parabolic]
    return [w for w in elements if all(_is_positive(w.inverse_act(a)) for a in roots)]


@dataclass(frozen=True)
class BggShape:
    root_system: RootSystemData
    parabolic: tuple
    weight: tuple
    terms: dict  # degree -> list of Dynkin-label tuples
    regular: bool

    @property
    def counts(self) -> tuple:
        return tuple(len(self.terms[d]) for d in sorted(self.terms))


def bgg_shape(rs: RootSystemData, parabolic: Iterable[int], labels: Sequence) -> BggShape:
    """Per-degree weights w.lam over minimal coset representatives of length = degree."""
    par = tuple(sorted(set(parabolic)))
    for i in par:
        if not 1 <= i <= rs.rank:
            raise ValueError(f"simple root index {i} outside 1..{rs.rank}")
    if not _is_dominant_integral(labels):
        raise ValueError(f"weight {tuple(str(rf(x)) for x in labels)} is not dominant integral")
    reps = minimal_coset_representatives(rs, par)
    terms: dict[int, list] = {}
    for w in reps:
        terms.setdefault(w.length, []).append(dot_action(rs, w, labels))
    top = max(terms)
    terms = {d: terms.get(d, []) for d in range(top + 1)}
    return BggShape(rs, par, tuple(rf(x) for x in labels), terms, regularity_check(rs, labels))
