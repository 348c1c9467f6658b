"""Koszul complexes of truncated induced modules and the Casimir cut.

Indexing is homological: ``diff[d]`` maps degree d to degree d-1. The
complex ``B(n, s)`` is

    degree 1: U^{<=n-1} (x) V_{s+1} (x) n-   --Xi_s-->   degree 0: U^{<=n} (x) V_s

with ``Xi_N(P (x) e_{N+1,i} (x) u-) = u-P (x) e_{N,i} + (k-i) P (x) e_{N,i-1}``
(terms with index -1 or N+1 are zero). The general Koszul differential
``d`` with X = u- carries a sign and equals ``-Xi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactfield import ONE, ZERO, K, RatFunc, rf
from .linalg import Matrix, column_space, nullspace, rank, solve
from .sl2core import transition_uminus, DualBasisElement
from .verma import (
    CentralCharacter,
    PBWVector,
    TruncatedModule,
    TruncationEscape,
    casimir_matrix,
    generalized_eigenspace_coords,
    weight_spaces,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "ComplexError",
    "koszul_differential",
    "xi",
    "xi_apply",
    "kernel_generator",
    "q_recursion",
    "surjectivity_witness",
    "build_B",
    "transition_maps",
    "TransitionMaps",
    "bgg_cut",
    "BggCut",
    "default_window",
]


class ComplexError(ValueError):
    """A differential or map failed a structural check."""


@dataclass(frozen=True)
class ChainComplex:
    dims: Mapping[int, int]
    diff: Mapping[int, Matrix] = field(default_factory=dict)
    modules: Mapping[int, TruncatedModule] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        degs = sorted(self.dims)
        if degs and degs != list(range(degs[0], degs[-1] + 1)):
            raise ComplexError("degrees must form a contiguous range")
        for d, m in self.diff.items():
            if m.shape != (self.dims.get(d - 1, 0), self.dims.get(d, 0)):
                raise ComplexError(f"differential at degree {d} has shape {m.shape}")
        for d in degs:
            if d in self.diff and d - 1 in self.diff:
                if not (self.diff[d - 1] @ self.diff[d]).is_zero():
                    raise ComplexError(f"d o d != 0 at degree {d}")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def d(self, deg: int) -> Matrix:
        """Differential out of degree ``deg`` (zero matrix when absent)."""
        if deg in self.diff:
            return self.diff[deg]
        return Matrix.zeros(self.dim(deg - 1), self.dim(deg))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in self.dims.items())


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    maps: Mapping[int, Matrix]
    name: str = ""

    def __post_init__(self):
        for d in self.source.degrees:
            f = self.at(d)
            if f.shape != (self.target.dim(d), self.source.dim(d)):
                raise ComplexError(f"map at degree {d} has shape {f.shape}")

    def at(self, d: int) -> Matrix:
        if d in self.maps:
            return self.maps[d]
        return Matrix.zeros(self.target.dim(d), self.source.dim(d))

    def commutes(self) -> bool:
        degs = set(self.source.degrees) | set(self.target.degrees)
        for d in degs:
            lhs = self.target.d(d) @ self.at(d)
            rhs = self.at(d - 1) @ self.source.d(d)
            if lhs != rhs:
                return False
        return True

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self o first``."""
        degs = set(first.source.degrees)
        return ChainMap(first.source, self.target,
                        {d: self.at(d) @ first.at(d) for d in degs},
                        f"{self.name} o {first.name}")

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {d: Matrix.identity(c.dim(d)) for d in c.degrees}, "id")

    @classmethod
    def zero(cls, a: ChainComplex, b: ChainComplex) -> "ChainMap":
        return cls(a, b, {}, "0")


# -- differentials --------------------------------------------------------------

def koszul_differential(n: int, m: int, j: int = 1) -> Matrix:
    """``d: U^{<=n} (x) V_m (x) wedge^j -> U^{<=n+1} (x) V_{m-1} (x) wedge^{j-1}``.

    d(P (x) x (x) u-) = -(u-P (x) x' - P (x) u-x) where x' is the image under
    the restriction V_m -> V_{m-1} and u-x uses the level-lowering action.
    For j = 0 there is no target and the matrix has zero rows.
    """
    src = TruncatedModule(n, m, j)
    if j == 0:
        return Matrix.zeros(0, src.dim)
    if m < 1:
        raise ValueError("the source level must be at least 1")
    tgt = TruncatedModule(n + 1, m - 1, 0)
    entries = {}
    for col, (a, i, _) in enumerate(src.basis):
        if i <= m - 1:
            entries[(tgt.index[(a + 1, i, 0)], col)] = -ONE
        ux = transition_uminus(DualBasisElement(m, i))
        for i2, c in ux.coeffs.items():
            r = tgt.index[(a, i2, 0)]
            entries[(r, col)] = entries.get((r, col), ZERO) + c
    return Matrix.from_sparse(tgt.dim, src.dim, entries)


def _xi_terms(N: int, a: int, i: int) -> list:
    out = []
    if i <= N:
        out.append(((a + 1, i, 0), ONE))
    if i >= 1:
        out.append(((a, i - 1, 0), K - i))
    return out


def xi(N: int, n_trunc: int) -> Matrix:
    """Matrix of Xi_N from U^{<=n-1} (x) V_{N+1} (x) n- to U^{<=n} (x) V_N."""
    if n_trunc < 1:
        raise ValueError("n_trunc must be at least 1")
    src = TruncatedModule(n_trunc - 1, N + 1, 1)
    tgt = TruncatedModule(n_trunc, N, 0)
    entries = {}
    for col, (a, i, _) in enumerate(src.basis):
        for b, c in _xi_terms(N, a, i):
            entries[(tgt.index[b], col)] = c
    return Matrix.from_sparse(tgt.dim, src.dim, entries)


def xi_apply(N: int, v: PBWVector) -> PBWVector:
    out: dict = {}
    for (a, i, w), c in v.terms.items():
        if w != 1 or not 0 <= i <= N + 1:
            raise ValueError(f"{(a, i, w)} is not a basis symbol of V_{N + 1} (x) n-")
        for b, x in _xi_terms(N, a, i):
            out[b] = out.get(b, ZERO) + c * x
    return PBWVector(out)


def kernel_coefficient(i: int) -> RatFunc:
    """(-1)^i / ((k-1)(k-2)...(k-i))."""
    c = ONE
    for p in range(1, i + 1):
        c = c / (K - p)
    return c if i % 2 == 0 else -c


def kernel_generator(N: int) -> PBWVector:
    """sum_i (-1)^i/((k-1)...(k-i)) (u-)^i (x) e_{N+1,i} (x) u-."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return PBWVector({(i, i, 1): kernel_coefficient(i) for i in range(N + 2)})


def q_recursion(N: int, i: int, P: Mapping[int, RatFunc]) -> dict[int, dict]:
    """Polynomials Q_j (as {u- degree: coefficient}) with Xi_N(sum Q_j e_{N+1,j}) = P e_{N,i}.

    Q_j = 0 for j <= i, Q_{i+1} = P/(k-i-1), Q_{j+1} = -u- Q_j/(k-j-1).
    """
    if not 0 <= i <= N:
        raise ValueError("target index outside V_N")
    qs: dict[int, dict] = {}
    cur = {a: rf(c) / (K - i - 1) for a, c in P.items() if not rf(c).is_zero()}
    qs[i + 1] = cur
    for j in range(i + 1, N + 1):
        cur = {a + 1: -c / (K - j - 1) for a, c in cur.items()}
        qs[j + 1] = cur
    return qs


def surjectivity_witness(N: int, n_trunc: int, target: PBWVector) -> PBWVector:
    """Preimage of ``target`` in U^{<=n-1} (x) V_{N+1} (x) n- under Xi_N."""
    by_index: dict[int, dict] = {}
    for (a, i, w), c in target.terms.items():
        if w != 0 or not 0 <= i <= N:
            raise ValueError(f"{(a, i, w)} is not a basis symbol of U (x) V_{N}")
        by_index.setdefault(i, {})[a] = c
    out = PBWVector()
    for i, P in sorted(by_index.items()):
        deg = max(P)
        if deg + (N - i) + 1 > n_trunc:
            raise TruncationEscape(
                f"witness for degree {deg} at index {i} needs n >= {deg + N - i + 1}"
            )
        for j, Q in q_recursion(N, i, P).items():
            out = out + PBWVector({(a, j, 1): c for a, c in Q.items()})
    return out


# -- the complexes B(n, s) ------------------------------------------------------------

def build_B(n: int, s: int) -> ChainComplex:
    if n < 1 or s < 0:
        raise ValueError("need n >= 1 and s >= 0")
    top = TruncatedModule(n - 1, s + 1, 1)
    bottom = TruncatedModule(n, s, 0)
    return ChainComplex(
        {0: bottom.dim, 1: top.dim},
        {1: xi(s, n)},
        {0: bottom, 1: top},
        f"B({n},{s})",
    )


def _restrict_matrix(src: TruncatedModule, tgt: TruncatedModule) -> Matrix:
    """V-level restriction (and u- degree inclusion) between truncated modules."""
    entries = {}
    for col, (a, i, w) in enumerate(src.basis):
        b = (a, i, w)
        if b in tgt.index:
            entries[(tgt.index[b], col)] = ONE
    return Matrix.from_sparse(tgt.dim, src.dim, entries)


@dataclass(frozen=True)
class TransitionMaps:
    restriction: ChainMap  # B(n, s+1) -> B(n, s)
    n_inclusion: ChainMap  # B(n, s) -> B(n+1, s)
    alpha: Matrix  # restriction on kernels, in the basis (u-)^q e
    alpha_injective: bool
    alpha_surjective: bool


def transition_maps(n: int, s: int) -> TransitionMaps:
    big, small, wider = build_B(n, s + 1), build_B(n, s), build_B(n + 1, s)
    restriction = ChainMap(
        big, small,
        {d: _restrict_matrix(big.modules[d], small.modules[d]) for d in (0, 1)},
        f"res B({n},{s + 1})->B({n},{s})",
    )
    n_inclusion = ChainMap(
        small, wider,
        {d: _restrict_matrix(small.modules[d], wider.modules[d]) for d in (0, 1)},
        f"inc B({n},{s})->B({n + 1},{s})",
    )
    for f in (restriction, n_inclusion):
        if not f.commutes():
            raise ComplexError(f"{f.name} does not commute with the differentials")
    # kernel bases (u-)^q e_N in the degree-1 coordinates
    src_ker = [kernel_generator(s + 1).shift(q).coords(big.modules[1]) for q in range(max(0, n - s - 2))]
    tgt_ker = [kernel_generator(s).shift(q).coords(small.modules[1]) for q in range(max(0, n - s - 1))]
    rmat = restriction.at(1)
    images = Matrix.from_columns([rmat.apply(v) for v in src_ker], small.dim(1))
    tgt = Matrix.from_columns(tgt_ker, small.dim(1))
    alpha = solve(tgt, images) if tgt_ker else Matrix.zeros(0, len(src_ker))
    if alpha is None:
        raise ComplexError("restriction does not map kernels into kernels")
    r = rank(alpha)
    return TransitionMaps(restriction, n_inclusion, alpha, r == alpha.ncols, r == alpha.nrows)


# -- the cut --------------------------------------------------------------------------------

def default_window(c: ChainComplex) -> range:
    """Weight indices that are interior in every degree of ``c``."""
    mods = [c.modules[d] for d in c.degrees if d in c.modules]
    if len(mods) != len(c.degrees):
        raise ComplexError("the cut needs a truncated module in every degree")
    lo = max(m.interior_min for m in mods)
    hi = max(m.weight_range.stop for m in mods)
    return range(lo, max(lo, hi))


@dataclass(frozen=True)
class BggCut:
    chi: CentralCharacter
    window: tuple
    windowed: ChainComplex
    window_inclusion: ChainMap  # windowed -> c
    window_projection: ChainMap  # c -> windowed
    sub: ChainComplex
    quotient: ChainComplex
    inclusion: ChainMap  # sub -> c
    sub_to_window: ChainMap  # sub -> windowed
    projection: ChainMap  # c -> quotient
    splitting: ChainMap  # quotient -> c


def _embed(vecs: Sequence[Sequence], positions: Sequence[int], dim: int) -> list[tuple]:
    out = []
    for v in vecs:
        full = [ZERO] * dim
        for p, x in zip(positions, v):
            full[p] = x
        out.append(tuple(full))
    return out


def _restricted_differential(c: ChainComplex, bases: Mapping[int, Matrix], what: str) -> dict:
    diff = {}
    for d in c.degrees:
        if d - 1 not in c.dims:
            continue
        src, tgt = bases[d], bases[d - 1]
        img = c.d(d) @ src
        if src.ncols == 0:
            diff[d] = Matrix.zeros(tgt.ncols, 0)
            continue
        if tgt.ncols == 0:
            if not img.is_zero():
                raise ComplexError(f"the differential does not preserve the {what} at degree {d}")
            diff[d] = Matrix.zeros(0, src.ncols)
            continue
        sol = solve(tgt, img)
        if sol is None:
            raise ComplexError(f"the differential does not preserve the {what} at degree {d}")
        diff[d] = sol
    return diff


def bgg_cut(c: ChainComplex, chi: CentralCharacter, t_window: Iterable[int] | None = None) -> BggCut:
    """Split the weight window of ``c`` into the generalized chi-eigenspace and its complement.

    The complement is the sum of the other generalized eigenspaces, i.e. the
    image of (Omega - chi)^d on each weight space; both pieces are
    subcomplexes because the differential commutes with Omega.
    """
    window = tuple(default_window(c) if t_window is None else sorted(set(t_window)))
    wset = set(window)
    positions: dict[int, list[int]] = {}
    sub_vecs: dict[int, list] = {}
    quo_vecs: dict[int, list] = {}
    for d in c.degrees:
        m = c.modules.get(d)
        if m is None:
            raise ComplexError("the cut needs a truncated module in every degree")
        spaces = weight_spaces(m)
        for t in window:
            if spaces.get(t) and not m.is_interior(t):
                raise TruncationEscape(f"weight index {t} is a boundary weight of {m}")
        positions[d] = [k for k, b in enumerate(m.basis) if m.weight_index(b) in wset]
        local = {b: p for p, b in enumerate(m.basis[k] for k in positions[d])}
        sv, qv = [], []
        for t in window:
            space = spaces.get(t)
            if not space:
                continue
            pos = [local[b] for b in space]
            gen = generalized_eigenspace_coords(m, chi, t)
            omega = casimir_matrix(m, t)
            shifted = (omega - Matrix.identity(len(space)).scale(chi.value)).power(len(space))
            comp = column_space(shifted)
            if len(gen) + len(comp) != len(space):
                raise ComplexError(f"eigenspace split fails at degree {d}, t={t}")
            sv += _embed(gen, pos, len(positions[d]))
            qv += _embed(comp, pos, len(positions[d]))
        sub_vecs[d], quo_vecs[d] = sv, qv

    wdims = {d: len(positions[d]) for d in c.degrees}
    wdiff = {}
    for d in c.degrees:
        if d - 1 in c.dims:
            full = c.d(d)
            keep_rows = set(positions[d - 1])
            for col in positions[d]:
                for r in range(c.dim(d - 1)):
                    if r not in keep_rows and not full[r, col].is_zero():
                        raise ComplexError("the differential does not preserve weights")
            wdiff[d] = full.submatrix(positions[d - 1], positions[d])
    windowed = ChainComplex(wdims, wdiff, {}, f"{c.name}[window]")
    emb = {d: Matrix.from_sparse(c.dim(d), wdims[d], {(p, q): ONE for q, p in enumerate(positions[d])})
           for d in c.degrees}
    w_inc = ChainMap(windowed, c, emb, "window inclusion")
    w_proj = ChainMap(c, windowed, {d: emb[d].transpose() for d in c.degrees}, "window projection")

    S = {d: Matrix.from_columns(sub_vecs[d], wdims[d]) for d in c.degrees}
    Q = {d: Matrix.from_columns(quo_vecs[d], wdims[d]) for d in c.degrees}
    sub = ChainComplex({d: S[d].ncols for d in c.degrees},
                       _restricted_differential(windowed, S, "eigenspace"), {}, f"{c.name}_chi")
    quotient = ChainComplex({d: Q[d].ncols for d in c.degrees},
                            _restricted_differential(windowed, Q, "complement"), {}, f"{c.name}/chi")
    sub_to_window = ChainMap(sub, windowed, S, "sub inclusion")
    inclusion = w_inc.compose(sub_to_window)
    splitting = w_inc.compose(ChainMap(quotient, windowed, Q, "complement inclusion"))
    proj = {}
    for d in c.degrees:
        n = wdims[d]
        if n == 0:
            proj[d] = Matrix.zeros(Q[d].ncols, c.dim(d))
            continue
        coords = solve(S[d].hstack(Q[d]), Matrix.identity(n))
        if coords is None:
            raise ComplexError(f"eigenspace split is not a direct sum at degree {d}")
        qpart = coords.submatrix(range(S[d].ncols, n), range(n))
        proj[d] = qpart @ emb[d].transpose()
    projection = ChainMap(c, quotient, proj, "projection to complement")
    for f in (inclusion, sub_to_window, splitting, projection, w_inc, w_proj):
        if not f.commutes():
            raise ComplexError(f"{f.name} is not a chain map")
    return BggCut(chi, window, windowed, w_inc, w_proj, sub, quotient, inclusion,
                  sub_to_window, projection, splitting)
