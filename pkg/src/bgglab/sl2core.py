"""sl2 generators, the induced module X^k Q(k)[Y], and its truncated duals V_N.

Conventions. ``u-``, ``u+``, ``H`` satisfy [H,u+] = 2u+, [H,u-] = -2u-,
[u+,u-] = H and act on monomials by

    u-(X^k Y^n) = (k-n) X^k Y^(n+1)
    H(X^k Y^n)  = (k-2n) X^k Y^n
    u+(X^k Y^n) = n X^k Y^(n-1).

``V_N`` is the dual of ``Fil_N`` (Y-degree at most N). Its basis ``e_{N,i}``
is the dual basis rescaled so that

    <e_{N,i}, X^k Y^n> = delta_{i,n} (k-i)/k,

which is the scaling under which the level-lowering map
``u-(e_{N+1,i}) = (-k+i) e_{N,i-1}`` is the restriction of the contragredient
action (g phi)(x) = -phi(g x). In this basis

    H e_{N,i}  = (-k+2i) e_{N,i}
    u+ e_{N,i} = -(i+1)(k-i)/(k-i-1) e_{N,i+1}     (0 for i = N)
    u- e_{N,i} = -(k-i) e_{N,i-1}                  (0 for i = 0).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .exactfield import ONE, ZERO, K, RatFunc, rf

__all__ = [
    "Sl2Gen",
    "H",
    "UPLUS",
    "UMINUS",
    "GENERATORS",
    "bracket",
    "InducedElement",
    "DualBasisElement",
    "DualVector",
    "monomial",
    "dual_basis",
    "act_induced",
    "fil_project",
    "act_dual",
    "transition_uminus",
    "transition_restrict",
    "dual_pairing",
    "dual_scale",
]


class Sl2Gen(enum.Enum):
    H = "H"
    UPLUS = "u+"
    UMINUS = "u-"

    def __str__(self):
        return self.value


H = Sl2Gen.H
UPLUS = Sl2Gen.UPLUS
UMINUS = Sl2Gen.UMINUS
GENERATORS = (H, UPLUS, UMINUS)

_BRACKETS = {
    (H, UPLUS): (2, UPLUS),
    (H, UMINUS): (-2, UMINUS),
    (UPLUS, UMINUS): (1, H),
}


def bracket(a: Sl2Gen, b: Sl2Gen) -> tuple[int, Sl2Gen | None]:
    """[a, b] as ``(coefficient, generator)``; ``(0, None)`` when it vanishes."""
    if a == b:
        return 0, None
    if (a, b) in _BRACKETS:
        return _BRACKETS[(a, b)]
    c, g = _BRACKETS[(b, a)]
    return -c, g


def _clean(coeffs: Mapping) -> dict:
    return {key: rf(c) for key, c in sorted(coeffs.items()) if not rf(c).is_zero()}


@dataclass(frozen=True)
class InducedElement:
    """Finite sum of ``c_n X^k Y^n``; ``coeffs`` maps n to c_n."""

    coeffs: Mapping[int, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    def __add__(self, other: "InducedElement") -> "InducedElement":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, ZERO) + c
        return InducedElement(out)

    def __sub__(self, other: "InducedElement") -> "InducedElement":
        return self + other.scale(-1)

    def scale(self, c) -> "InducedElement":
        c = rf(c)
        return InducedElement({n: x * c for n, x in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*X^k*Y^{n}" for n, c in self.coeffs.items())


def monomial(n: int, c=1) -> InducedElement:
    """``c X^k Y^n``."""
    return InducedElement({n: rf(c)})


@dataclass(frozen=True, order=True)
class DualBasisElement:
    """The basis vector ``e_{N,i}`` of ``V_N``."""

    level: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index <= self.level:
            raise ValueError(f"e_{{{self.level},{self.index}}} needs 0 <= i <= N")

    def vector(self) -> "DualVector":
        return DualVector(self.level, {self.index: ONE})

    def __str__(self):
        return f"e_{{{self.level},{self.index}}}"


@dataclass(frozen=True)
class DualVector:
    """Element of ``V_level`` as a map index -> coefficient."""

    level: int
    coeffs: Mapping[int, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        cl = _clean(self.coeffs)
        for i in cl:
            if not 0 <= i <= self.level:
                raise ValueError(f"index {i} outside V_{self.level}")
        object.__setattr__(self, "coeffs", cl)

    def __add__(self, other: "DualVector") -> "DualVector":
        if other.level != self.level:
            raise ValueError("adding vectors of different levels")
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, ZERO) + c
        return DualVector(self.level, out)

    def __sub__(self, other: "DualVector") -> "DualVector":
        return self + other.scale(-1)

    def scale(self, c) -> "DualVector":
        c = rf(c)
        return DualVector(self.level, {i: x * c for i, x in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> RatFunc:
        return self.coeffs.get(i, ZERO)

    def __hash__(self):
        return hash((self.level, tuple(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*e_{{{self.level},{i}}}" for i, c in self.coeffs.items())


def dual_basis(level: int) -> list[DualBasisElement]:
    return [DualBasisElement(level, i) for i in range(level + 1)]


def _as_dual(e) -> DualVector:
    return e.vector() if isinstance(e, DualBasisElement) else e


# -- actions -------------------------------------------------------------------

def act_induced(g: Sl2Gen, v: InducedElement) -> InducedElement:
    out: dict[int, RatFunc] = {}
    for n, c in v.coeffs.items():
        if g is UMINUS:
            out[n + 1] = out.get(n + 1, ZERO) + c * (K - n)
        elif g is H:
            out[n] = out.get(n, ZERO) + c * (K - 2 * n)
        elif n > 0:
            out[n - 1] = out.get(n - 1, ZERO) + c * n
    return InducedElement(out)


def fil_project(v: InducedElement, n: int) -> InducedElement:
    """Drop every Y-degree above ``n``."""
    if n < 0:
        raise ValueError("filtration index must be non-negative")
    return InducedElement({d: c for d, c in v.coeffs.items() if d <= n})


def dual_weight(i: int) -> RatFunc:
    return -K + 2 * i


def uplus_dual_coefficient(i: int) -> RatFunc:
    """Coefficient c with u+ e_{N,i} = c e_{N,i+1} (valid for i < N)."""
    return (K - i) * (-(i + 1)) / (K - i - 1)


def act_dual(g: Sl2Gen, e) -> DualVector:
    """Same-level action on ``V_N``; ``e`` is a basis element or a DualVector."""
    v = _as_dual(e)
    N = v.level
    out: dict[int, RatFunc] = {}
    for i, c in v.coeffs.items():
        if g is H:
            out[i] = out.get(i, ZERO) + c * dual_weight(i)
        elif g is UPLUS:
            if i < N:
                out[i + 1] = out.get(i + 1, ZERO) + c * uplus_dual_coefficient(i)
        elif i > 0:
            out[i - 1] = out.get(i - 1, ZERO) + c * (i - K)
    return DualVector(N, out)


def transition_uminus(e) -> DualVector:
    """``u-: V_{N+1} -> V_N``, e_{N+1,i} -> (-k+i) e_{N,i-1}."""
    v = _as_dual(e)
    if v.level < 1:
        raise ValueError("transition needs level >= 1")
    out = {i - 1: c * (i - K) for i, c in v.coeffs.items() if i > 0}
    return DualVector(v.level - 1, out)


def transition_restrict(e) -> DualVector:
    """Dual of the inclusion Fil_N in Fil_{N+1}: e_{N+1,i} -> e_{N,i}, top index -> 0."""
    v = _as_dual(e)
    if v.level < 1:
        raise ValueError("transition needs level >= 1")
    N = v.level - 1
    return DualVector(N, {i: c for i, c in v.coeffs.items() if i <= N})


def dual_scale(i: int) -> RatFunc:
    """<e_{N,i}, X^k Y^i>."""
    return (K - i) / K


def dual_pairing(phi, x: InducedElement) -> RatFunc:
    """Evaluate phi in V_N on x in Fil_N (degrees above N pair to zero)."""
    v = _as_dual(phi)
    acc = ZERO
    for i, c in v.coeffs.items():
        xi = x.coeffs.get(i)
        if xi is not None:
            acc = acc + c * xi * dual_scale(i)
    return acc
