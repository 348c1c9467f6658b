"""Homology of chain complexes over Q(k), induced maps, duals and pairings.

Cycle and boundary bases are the canonical echelon bases from
:mod:`bgglab.linalg`. Homology representatives are the cycle basis
vectors that are independent modulo boundaries, taken greedily in order,
so induced-map matrices are reproducible.

The dual of a complex puts ``C_d^*`` in degree ``-d`` with differential the
transpose; the pairing of ``H_i(C)`` with ``H_{-i}(C^*)`` evaluates a
cocycle on a cycle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complexes import ChainComplex, ChainMap, build_B, transition_maps
from .exactfield import ONE, ZERO, RatFunc, SpecializationError, generic_rational, rf, specialize
from .linalg import (
    Matrix,
    RankRecord,
    column_space,
    nullspace,
    numeric_rank,
    rank,
    rank_log,
    solve,
    specialize_matrix,
    vec_add,
    vec_dot,
    vec_scale,
)
from .sl2core import (
    UMINUS,
    DualBasisElement,
    act_induced,
    fil_project,
    monomial,
    transition_restrict,
    transition_uminus,
)

__all__ = [
    "nullspace",
    "HomologyDegree",
    "HomologyReport",
    "homology",
    "InducedMap",
    "induced_on_homology",
    "dualize",
    "homology_pairing",
    "PairingReport",
    "dual_vanishing_check",
    "section_squares",
    "section_injectivity_check",
    "oracle_check",
    "OracleReport",
    "rank_log",
]


@dataclass(frozen=True)
class HomologyDegree:
    degree: int
    cycles: tuple
    boundaries: tuple
    representatives: tuple

    @property
    def dim(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class HomologyReport:
    complex: ChainComplex
    degrees: Mapping[int, HomologyDegree]

    def dim(self, d: int) -> int:
        return self.degrees[d].dim if d in self.degrees else 0

    @property
    def dims(self) -> dict[int, int]:
        return {d: h.dim for d, h in sorted(self.degrees.items())}

    def coordinates(self, d: int, z: Sequence) -> tuple:
        """Coordinates of the class of cycle ``z`` in the representative basis."""
        h = self.degrees[d]
        if not h.representatives:
            return ()
        n = self.complex.dim(d)
        a = Matrix.from_columns(list(h.boundaries) + list(h.representatives), n)
        sol = solve(a, Matrix.from_columns([tuple(z)], n))
        if sol is None:
            raise ValueError(f"vector is not a cycle in degree {d}")
        return sol.column(0)[len(h.boundaries):]


def homology(c: ChainComplex) -> HomologyReport:
    out = {}
    for d in c.degrees:
        n = c.dim(d)
        if n == 0:
            out[d] = HomologyDegree(d, (), (), ())
            continue
        cycles = tuple(nullspace(c.d(d))) if c.dim(d - 1) else tuple(
            tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n))
        boundaries = tuple(column_space(c.d(d + 1))) if c.dim(d + 1) else ()
        reps = []
        current = list(boundaries)
        r = len(current)
        for z in cycles:
            trial = Matrix.from_columns(current + [z], n)
            if rank(trial) > r:
                current.append(z)
                reps.append(z)
                r += 1
        out[d] = HomologyDegree(d, cycles, boundaries, tuple(reps))
    return HomologyReport(c, out)


@dataclass(frozen=True)
class InducedMap:
    map: ChainMap
    source: HomologyReport
    target: HomologyReport
    matrices: Mapping[int, Matrix]

    @property
    def is_zero_on_homology(self) -> bool:
        return all(m.is_zero() for m in self.matrices.values())

    @property
    def is_quasi_iso(self) -> bool:
        for d, m in self.matrices.items():
            if m.nrows != m.ncols or rank(m) != m.nrows:
                return False
        return True

    def is_injective(self, d: int) -> bool:
        m = self.matrices[d]
        return rank(m) == m.ncols


def induced_on_homology(f: ChainMap, hs: HomologyReport | None = None,
                        ht: HomologyReport | None = None) -> InducedMap:
    hs = hs or homology(f.source)
    ht = ht or homology(f.target)
    mats = {}
    for d in sorted(set(f.source.degrees) | set(f.target.degrees)):
        src_reps = hs.degrees[d].representatives if d in hs.degrees else ()
        tgt_dim = ht.dim(d)
        cols = []
        for z in src_reps:
            img = f.at(d).apply(z)
            cols.append(ht.coordinates(d, img) if tgt_dim else ())
        mats[d] = Matrix.from_columns(cols, tgt_dim)
    return InducedMap(f, hs, ht, mats)


def _dual_complex(c: ChainComplex) -> ChainComplex:
    dims = {-d: n for d, n in c.dims.items()}
    diff = {}
    for d in c.degrees:
        if d - 1 in c.dims:
            diff[-(d - 1)] = c.d(d).transpose()
    return ChainComplex(dims, diff, {}, f"{c.name}^*")


def dualize(x):
    """Dual of a :class:`ChainComplex` or (contravariantly) of a :class:`ChainMap`."""
    if isinstance(x, ChainComplex):
        return _dual_complex(x)
    if isinstance(x, ChainMap):
        src, tgt = _dual_complex(x.target), _dual_complex(x.source)
        return ChainMap(src, tgt, {-d: m.transpose() for d, m in x.maps.items()}, f"{x.name}^*")
    raise TypeError(f"cannot dualize {type(x).__name__}")


@dataclass(frozen=True)
class PairingReport:
    degree: int
    gram: Matrix
    nondegenerate: bool
    well_defined: bool


def _gram(hc: HomologyDegree, hd: HomologyDegree) -> Matrix:
    return Matrix([[vec_dot(phi, x) for phi in hd.representatives] for x in hc.representatives],
                  len(hd.representatives))


def homology_pairing(c: ChainComplex, degree: int, seed: int = 0,
                     hc: HomologyReport | None = None, hd: HomologyReport | None = None) -> PairingReport:
    """Gram matrix of <phi, x> on H_i(c) x H_{-i}(c^*), with a representative-perturbation check."""
    dual = dualize(c)
    hc = hc or homology(c)
    hd = hd or homology(dual)
    a, b = hc.degrees[degree], hd.degrees[-degree]
    gram = _gram(a, b)
    rng = random.Random(seed)
    ok = True
    if a.representatives and b.representatives:
        def perturb(vecs, boundaries):
            out = []
            for v in vecs:
                for bd in boundaries:
                    v = vec_add(v, vec_scale(bd, Fraction(rng.randint(-5, 5))))
                out.append(v)
            return tuple(out)

        pa = HomologyDegree(degree, a.cycles, a.boundaries, perturb(a.representatives, a.boundaries))
        pb = HomologyDegree(-degree, b.cycles, b.boundaries, perturb(b.representatives, b.boundaries))
        ok = _gram(pa, pb) == gram
    n = gram.nrows
    nondeg = gram.nrows == gram.ncols and rank(gram) == n
    return PairingReport(degree, gram, nondeg, ok)


def pairing_adjoint(f: ChainMap, degree: int) -> bool:
    """<H(f) a, b>_target = <a, H(f^*) b>_source on H_i, computed in representatives."""
    hs, ht = homology(f.source), homology(f.target)
    fd = dualize(f)
    hsd, htd = homology(fd.target), homology(fd.source)
    hf = induced_on_homology(f, hs, ht).matrices[degree]
    hfd = induced_on_homology(fd, htd, hsd).matrices[-degree]
    g_t = _gram(ht.degrees[degree], htd.degrees[-degree])
    g_s = _gram(hs.degrees[degree], hsd.degrees[-degree])
    lhs = hf.transpose() @ g_t if hf.ncols else Matrix.zeros(0, g_t.ncols)
    rhs = g_s @ hfd if g_s.nrows else Matrix.zeros(0, hfd.ncols)
    return lhs == rhs


@dataclass(frozen=True)
class DualVanishing:
    ok: bool
    counterexample: tuple | None


def dual_vanishing_check(f: ChainMap) -> DualVanishing:
    """If f is zero on homology then so is its dual; returns a witness cycle otherwise."""
    if not induced_on_homology(f).is_zero_on_homology:
        raise ValueError("the map is not zero on homology")
    fd = dualize(f)
    ind = induced_on_homology(fd)
    for d, m in ind.matrices.items():
        if not m.is_zero():
            col = next(j for j in range(m.ncols) if any(not x.is_zero() for x in m.column(j)))
            return DualVanishing(False, (d, ind.source.degrees[d].representatives[col]))
    return DualVanishing(True, None)


# -- sections ----------------------------------------------------------------

@dataclass(frozen=True)
class SectionSquares:
    n: int
    s: int
    fil_square: bool  # fil_project_{i+1} o u- = u- o fil_project_i on Fil_n
    dual_square: bool  # section V_s -> V_{s+1} commutes with the u- transitions
    restriction_square: bool  # restriction commutes with the u- transitions
    chain_section_defect: int  # rank of Xi o sigma - sigma o Xi on B(n, s)

    @property
    def ok(self) -> bool:
        return self.fil_square and self.dual_square and self.restriction_square


def _section(e: DualBasisElement) -> DualBasisElement:
    return DualBasisElement(e.level + 1, e.index)


def section_squares(n: int, s: int) -> SectionSquares:
    """Compatibility squares for the sections induced by the filtration projections."""
    fil_ok = True
    for i in range(s + 1):
        for deg in range(n + 1):
            x = monomial(deg)
            lhs = fil_project(act_induced(UMINUS, x), i + 1)
            rhs = act_induced(UMINUS, fil_project(x, i))
            fil_ok &= lhs == rhs
    dual_ok = True
    res_ok = True
    for i in range(s + 2):
        e = DualBasisElement(s + 1, i)
        lhs = transition_uminus(_section(e).vector())
        rhs = transition_uminus(e)
        rhs = type(rhs)(rhs.level + 1, rhs.coeffs)
        dual_ok &= lhs == rhs
    for i in range(s + 3):
        e = DualBasisElement(s + 2, i)
        lhs = transition_restrict(transition_uminus(e))
        rhs = transition_uminus(transition_restrict(e))
        res_ok &= lhs == rhs
    # chain-level: sigma: B(n, s) -> B(n, s+1), inclusion of dual indices
    small, big = build_B(n, s), build_B(n, s + 1)
    sig = {}
    for d in (0, 1):
        src, tgt = small.modules[d], big.modules[d]
        sig[d] = Matrix.from_sparse(tgt.dim, src.dim, {(tgt.index[b], c): ONE for c, b in enumerate(src.basis)})
    defect = big.d(1) @ sig[1] - sig[0] @ small.d(1)
    return SectionSquares(n, s, fil_ok, dual_ok, res_ok, rank(defect))


@dataclass(frozen=True)
class InjectivityResult:
    n: int
    s: int
    s_prime: int
    injective: dict  # degree -> bool
    source_dims: dict
    target_dims: dict


def section_injectivity_check(n: int, s: int, s_prime: int) -> InjectivityResult:
    """Is H(B(n,s)^*) -> H(B(n,s')^*), dual to the restriction B(n,s') -> B(n,s), injective?"""
    if s_prime < s:
        raise ValueError("need s' >= s")
    f = ChainMap.identity(build_B(n, s))
    for t in range(s, s_prime):
        f = f.compose(transition_maps(n, t).restriction)
    fd = dualize(f)
    ind = induced_on_homology(fd)
    inj = {d: ind.is_injective(d) for d in sorted(ind.matrices)}
    return InjectivityResult(n, s, s_prime, inj, ind.source.dims, ind.target.dims)


# -- specialization oracle ---------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    points: tuple
    checked: int
    mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _entry_values(entries: Iterable[RatFunc], q: Fraction) -> dict:
    return {x: specialize(x, q) for x in entries}


def oracle_points(records: Sequence[RankRecord], count: int, seed: int) -> tuple:
    """``count`` distinct generic rationals avoiding every pole of the recorded matrices."""
    return tuple(q for q, _ in _oracle_values(records, count, seed))


def _oracle_values(records: Sequence[RankRecord], count: int, seed: int) -> list:
    entries = {x for rec in records for row in rec.matrix.rows for x in row}
    found: list = []
    forbidden: set[Fraction] = set()
    draw = seed * 1000
    while len(found) < count:
        q = generic_rational(draw, forbidden)
        draw += 1
        try:
            values = _entry_values(entries, q)
        except SpecializationError:
            forbidden.add(q)
            continue
        forbidden.add(q)
        found.append((q, values))
    return found


def oracle_check(records: Sequence[RankRecord], count: int = 3, seed: int = 0) -> OracleReport:
    """Recompute every recorded rank numerically at generic rational values of k."""
    unique: dict = {}
    for rec in records:
        unique.setdefault(rec.matrix, rec.rank)
    recs = [RankRecord(m, r) for m, r in unique.items()]
    pts = _oracle_values(recs, count, seed)
    bad = []
    for rec in recs:
        for q, values in pts:
            r = numeric_rank([[values[x] for x in row] for row in rec.matrix.rows])
            if r != rec.rank:
                bad.append((rec.matrix.shape, rec.rank, q, r))
    return OracleReport(tuple(q for q, _ in pts), len(recs) * len(pts), tuple(bad))
