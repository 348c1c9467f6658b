"""Truncated induced modules U(n-)^{<=n} (x) V_s (x) wedge^j n-.

A basis vector ``(a, i, j)`` stands for ``(u-)^a (x) e_{s,i} (x) w`` where
``w`` is the wedge factor u- when j = 1 and absent when j = 0. Its
H-weight is ``-k + 2t`` with weight index ``t = i - a - j``.

The Casimir used throughout is ``Omega = H^2 + 2H + 4 u- u+``, which acts on
a highest-weight vector of weight lam by ``lam^2 + 2 lam``.

Operators that return matrices refuse to silently drop terms that leave
the truncation: they raise :class:`TruncationEscape`. A weight space is
*interior* when Omega maps it into the truncated module; that happens
exactly for ``t >= s - n - j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactfield import ONE, ZERO, K, RatFunc, rf
from .linalg import Matrix, charpoly, nullspace, poly_divide_linear
from .sl2core import H, UMINUS, UPLUS, Sl2Gen, uplus_dual_coefficient

__all__ = [
    "TruncationEscape",
    "TruncatedModule",
    "PBWVector",
    "CentralCharacter",
    "act",
    "weight_spaces",
    "operator_matrix",
    "casimir_matrix",
    "printed_casimir_matrix",
    "central_character",
    "linkage",
    "generalized_eigenspace",
    "generalized_eigenspace_coords",
    "characters_of",
    "verma_filtration",
    "VermaFiltration",
    "stabilization_scan",
    "StabilizationTable",
    "centrality_check",
    "spectrum_check",
    "complete_truncation",
]


class TruncationEscape(ArithmeticError):
    """An operator sent a basis vector past the u- degree bound."""


Basis = tuple  # (a, i, w)


@dataclass(frozen=True)
class TruncatedModule:
    n: int
    s: int
    j: int

    def __post_init__(self):
        if self.n < 0 or self.s < 0 or self.j not in (0, 1):
            raise ValueError(f"invalid module parameters {self}")

    @cached_property
    def basis(self) -> tuple:
        return tuple((a, i, self.j) for a in range(self.n + 1) for i in range(self.s + 1))

    @cached_property
    def index(self) -> dict:
        return {b: k for k, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return (self.n + 1) * (self.s + 1)

    def weight_index(self, b: Basis) -> int:
        return b[1] - b[0] - b[2]

    @property
    def weight_range(self) -> range:
        return range(-self.n - self.j, self.s - self.j + 1)

    @property
    def interior_min(self) -> int:
        """Least weight index on which Omega stays inside the truncation."""
        return self.s - self.n - self.j

    def is_interior(self, t: int) -> bool:
        return t >= self.interior_min

    def contains(self, b: Basis) -> bool:
        a, i, w = b
        return 0 <= a <= self.n and 0 <= i <= self.s and w == self.j

    def __str__(self):
        wedge = " (x) n-" if self.j else ""
        return f"U^<={self.n} (x) V_{self.s}{wedge}"


@dataclass(frozen=True)
class PBWVector:
    """Finite combination of basis symbols ``(a, i, w)`` with Q(k) coefficients."""

    terms: Mapping[Basis, RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean = {b: rf(c) for b, c in sorted(self.terms.items()) if not rf(c).is_zero()}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis_vector(cls, a: int, i: int, w: int, c=1) -> "PBWVector":
        return cls({(a, i, w): rf(c)})

    @classmethod
    def from_coords(cls, m: TruncatedModule, coords: Sequence, basis: Sequence | None = None) -> "PBWVector":
        basis = m.basis if basis is None else basis
        return cls({b: c for b, c in zip(basis, coords)})

    def coords(self, m: TruncatedModule, basis: Sequence | None = None) -> tuple:
        basis = m.basis if basis is None else basis
        idx = {b: k for k, b in enumerate(basis)}
        out = [ZERO] * len(basis)
        for b, c in self.terms.items():
            if b not in idx:
                raise TruncationEscape(f"{b} is outside the given basis of {m}")
            out[idx[b]] = c
        return tuple(out)

    def __add__(self, other: "PBWVector") -> "PBWVector":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, ZERO) + c
        return PBWVector(out)

    def __sub__(self, other: "PBWVector") -> "PBWVector":
        return self + other.scale(-1)

    def scale(self, c) -> "PBWVector":
        c = rf(c)
        return PBWVector({b: x * c for b, x in self.terms.items()})

    def shift(self, q: int) -> "PBWVector":
        """Left multiplication by (u-)^q."""
        return PBWVector({(a + q, i, w): c for (a, i, w), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, i, w), c in self.terms.items():
            wedge = " (x) u-" if w else ""
            parts.append(f"({c}) (u-)^{a} (x) e_{i}{wedge}")
        return " + ".join(parts)


def _factor_weight(i: int, w: int) -> RatFunc:
    return -K + 2 * i - 2 * w


def act(g: Sl2Gen, v: PBWVector, ambient: TruncatedModule, strict: bool = False) -> PBWVector:
    """Action of ``g`` on ``v``.

    In elastic mode (default) the result may reach u- degree ``ambient.n + 1``;
    in strict mode that raises :class:`TruncationEscape`.
    """
    out: dict[Basis, RatFunc] = {}

    def put(b, c):
        out[b] = out.get(b, ZERO) + c

    for (a, i, w), c in v.terms.items():
        if not ambient.contains((min(a, ambient.n), i, w)) or a > ambient.n + (0 if strict else 1):
            raise TruncationEscape(f"{(a, i, w)} is not in {ambient}")
        if g is UMINUS:
            if strict and a + 1 > ambient.n:
                raise TruncationEscape(f"u- sends (u-)^{a} past degree {ambient.n}")
            put((a + 1, i, w), c)
        elif g is H:
            put((a, i, w), c * (_factor_weight(i, w) - 2 * a))
        else:
            if i < ambient.s:
                put((a, i + 1, w), c * uplus_dual_coefficient(i))
            if a > 0:
                put((a - 1, i, w), c * a * (_factor_weight(i, w) - (a - 1)))
    return PBWVector(out)


def weight_spaces(m: TruncatedModule) -> dict[int, list]:
    spaces: dict[int, list] = {}
    for b in m.basis:
        spaces.setdefault(m.weight_index(b), []).append(b)
    return {t: sorted(bs) for t, bs in sorted(spaces.items())}


def _space(m: TruncatedModule, t: int) -> list:
    return [(a, t + a + m.j, m.j) for a in range(m.n + 1) if 0 <= t + a + m.j <= m.s]


def _matrix_of(images: Sequence[PBWVector], target: list, m: TruncatedModule) -> Matrix:
    cols = [img.coords(m, target) for img in images]
    return Matrix.from_columns(cols, len(target))


_SHIFT = {H: 0, UPLUS: 1, UMINUS: -1}


def operator_matrix(g: Sl2Gen, m: TruncatedModule, t: int) -> Matrix:
    """Matrix of ``g`` from weight space ``t`` to weight space ``t + shift(g)`` (strict)."""
    src = _space(m, t)
    tgt = _space(m, t + _SHIFT[g])
    images = [act(g, PBWVector({b: ONE}), m, strict=True) for b in src]
    return _matrix_of(images, tgt, m)


def casimir_apply(v: PBWVector, m: TruncatedModule, strict: bool = True) -> PBWVector:
    hv = act(H, v, m)
    up = act(UPLUS, v, m)
    return act(H, hv, m) + hv.scale(2) + act(UMINUS, up, m, strict=strict).scale(4)


def casimir_matrix(m: TruncatedModule, t: int) -> Matrix:
    """Matrix of Omega = H^2 + 2H + 4u-u+ on weight space ``t`` (strict)."""
    src = _space(m, t)
    images = [casimir_apply(PBWVector({b: ONE}), m) for b in src]
    return _matrix_of(images, src, m)


def printed_casimir_matrix(m: TruncatedModule, t: int) -> Matrix:
    """Matrix of H^2 + u-u+ + u+u- on weight space ``t`` (kept for comparison)."""
    src = _space(m, t)
    images = []
    for b in src:
        v = PBWVector({b: ONE})
        img = act(H, act(H, v, m), m)
        img = img + act(UMINUS, act(UPLUS, v, m), m, strict=True)
        img = img + act(UPLUS, act(UMINUS, v, m, strict=True), m)
        images.append(img)
    return _matrix_of(images, src, m)


# -- central characters --------------------------------------------------------

def _affine_parts(lam: RatFunc) -> tuple[Fraction, Fraction]:
    lam = rf(lam)
    if not lam.is_polynomial() or lam.num.degree > 1:
        raise ValueError(f"weight {lam} is not affine in k")
    c = lam.num.coeffs
    beta = c[0] if c else Fraction(0)
    alpha = c[1] if len(c) > 1 else Fraction(0)
    return alpha, beta


@dataclass(frozen=True)
class CentralCharacter:
    value: RatFunc

    def __str__(self):
        return str(self.value)


def central_character(lam) -> CentralCharacter:
    lam = rf(lam)
    alpha, _ = _affine_parts(lam)
    if alpha not in (-1, 0, 1):
        raise ValueError(f"weight {lam} must have slope -1, 0 or 1 in k")
    return CentralCharacter(lam * lam + lam * 2)


def linkage(mu, lam) -> bool:
    """Whether ``mu`` and ``lam`` share a central character (mu in {lam, -lam-2})."""
    return central_character(mu) == central_character(lam)


def characters_of(m: TruncatedModule) -> list[CentralCharacter]:
    out: list[CentralCharacter] = []
    for i in range(m.s + 1):
        chi = central_character(_factor_weight(i, m.j))
        if chi not in out:
            out.append(chi)
    return out


def complete_truncation(s: int, j: int, t: int) -> int:
    """Least n for which weight index ``t`` is interior in U^{<=n} (x) V_s (x) wedge^j."""
    return max(0, s - j - t)


def generalized_eigenspace_coords(m: TruncatedModule, chi: CentralCharacter, t: int) -> list[tuple]:
    """Kernel of (Omega - chi)^d on weight space ``t`` in weight-space coordinates."""
    src = _space(m, t)
    if not src:
        return []
    omega = casimir_matrix(m, t)
    shifted = omega - Matrix.identity(len(src)).scale(chi.value)
    return nullspace(shifted.power(len(src)))


def generalized_eigenspace(m: TruncatedModule, chi: CentralCharacter, t: int) -> list[PBWVector]:
    src = _space(m, t)
    return [PBWVector.from_coords(m, v, src) for v in generalized_eigenspace_coords(m, chi, t)]


# -- checks on the Casimir -------------------------------------------------------

@dataclass(frozen=True)
class CentralityResult:
    checked: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def centrality_check(m: TruncatedModule) -> CentralityResult:
    """[g, Omega] = 0 on every weight space where all composites stay truncated."""
    checked = 0
    failures = []
    for t in m.weight_range:
        if not m.is_interior(t) or not _space(m, t):
            continue
        omega_t = casimir_matrix(m, t)
        for g, dt in ((UPLUS, 1), (UMINUS, -1)):
            t2 = t + dt
            if not m.is_interior(t2):
                continue
            if g is UMINUS and any(a == m.n for a, _, _ in _space(m, t)):
                continue
            if not _space(m, t2):
                continue
            gm = operator_matrix(g, m, t)
            lhs = casimir_matrix(m, t2) @ gm
            rhs = gm @ omega_t
            checked += 1
            if lhs != rhs:
                failures.append((str(g), t))
    return CentralityResult(checked, tuple(failures))


@dataclass(frozen=True)
class SpectrumResult:
    t: int
    charpoly: tuple
    roots: tuple
    splits: bool


def spectrum_check(m: TruncatedModule, t: int) -> SpectrumResult:
    """Divide the characteristic polynomial of Omega by the expected linear factors."""
    src = _space(m, t)
    roots = tuple(central_character(_factor_weight(i, w)).value for _, i, w in src)
    cp = charpoly(casimir_matrix(m, t))
    q = list(cp)
    ok = True
    for r in roots:
        q, rem = poly_divide_linear(q, r)
        if not rem.is_zero():
            ok = False
            break
    ok = ok and len(q) == 1 and q[0].is_one()
    return SpectrumResult(t, tuple(cp), roots, ok)


# -- Verma filtration ----------------------------------------------------------------

@dataclass(frozen=True)
class VermaFiltration:
    ordering: tuple
    quotients: tuple
    step_dims: dict  # n -> dims of E_1^{<=n}, E_2^{<=n}, ...
    total_dims: dict  # n -> (sum of graded pieces, (n+1)*len(weights))


def verma_filtration(weights: Sequence, n_levels: Iterable[int] = range(0, 5)) -> VermaFiltration:
    """Order weights decreasingly and tabulate the truncated filtration steps.

    The step ``E_p`` is U(n-) applied to the span of the first p weight
    vectors; at u- degree <= n it has dimension (n+1) p, and its graded
    pieces are truncated Verma modules of the listed weights.
    """
    ws = [rf(w) for w in weights]
    if not ws:
        raise ValueError("no weights given")
    parts = [_affine_parts(w) for w in ws]
    slopes = {a for a, _ in parts}
    if len(slopes) > 1:
        raise ValueError("weights with different slopes in k are not comparable")
    order = sorted(range(len(ws)), key=lambda p: (-parts[p][1], p))
    ordering = tuple(ws[p] for p in order)
    step_dims = {}
    totals = {}
    for n in n_levels:
        dims = tuple((n + 1) * p for p in range(1, len(ws) + 1))
        step_dims[n] = dims
        graded = sum(d - (dims[p - 1] if p else 0) for p, d in enumerate(dims))
        totals[n] = (graded, (n + 1) * len(ws))
    return VermaFiltration(ordering, ordering, step_dims, totals)


def filtration_is_stable(s: int, j: int) -> bool:
    """The spans of the top weight vectors of V_s (x) wedge^j are u+ and H stable."""
    m = TruncatedModule(0, s, j)
    for p in range(1, s + 2):
        keep = {(0, i, j) for i in range(s + 1 - p, s + 1)}
        for b in keep:
            for g in (H, UPLUS):
                img = act(g, PBWVector({b: ONE}), m)
                if any(x not in keep for x in img.terms):
                    return False
    return True


# -- stabilization ----------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizationTable:
    s: int
    j: int
    chi: CentralCharacter
    n_values: tuple
    dims: dict  # t -> tuple of dims (None where t is a boundary weight)
    onset: dict  # t -> least n from which the dimension stays constant (None if never)


def stabilization_scan(s_fixed: int, j: int, chi: CentralCharacter, t_window: Iterable[int],
                       n_range: Iterable[int]) -> StabilizationTable:
    ns = tuple(n_range)
    dims = {}
    onset = {}
    for t in t_window:
        row = []
        for n in ns:
            m = TruncatedModule(n, s_fixed, j)
            if not m.is_interior(t):
                row.append(None)
                continue
            row.append(len(generalized_eigenspace_coords(m, chi, t)))
        dims[t] = tuple(row)
        start = None
        for p in range(len(row) - 1, -1, -1):
            if row[p] is None or row[p] != row[-1]:
                break
            start = ns[p]
        onset[t] = start
    return StabilizationTable(s_fixed, j, chi, ns, dims, onset)
