"""Verification checks over the finite complexes, shared by the CLI and the tests.

Each ``check_*`` function returns a :class:`Check` whose ``data`` holds only
JSON-ready values (exact numbers are rendered as strings), so that reports
are byte-for-byte reproducible.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

from .complexes import (
    bgg_cut,
    build_B,
    kernel_generator,
    q_recursion,
    surjectivity_witness,
    transition_maps,
    xi,
    xi_apply,
)
from .exactfield import K, RatFunc
from .homology import (
    dual_vanishing_check,
    dualize,
    homology,
    homology_pairing,
    induced_on_homology,
    oracle_check,
    pairing_adjoint,
    section_injectivity_check,
    section_squares,
)
from .linalg import Matrix, is_surjective, nullspace, rank_log, span_basis
from .sl2core import H, UMINUS, UPLUS
from .verma import (
    PBWVector,
    TruncatedModule,
    act,
    casimir_matrix,
    central_character,
    centrality_check,
    characters_of,
    complete_truncation,
    generalized_eigenspace_coords,
    operator_matrix,
    printed_casimir_matrix,
    spectrum_check,
    stabilization_scan,
)
from .weyl import (
    bgg_shape,
    compose,
    dot_action,
    generate_weyl,
    length_histogram,
    generate_identity,
    root_system,
    simple_reflection,
)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

CASIMIR_NOTE = (
    "Casimir normalized as Omega = H^2 + 2H + 4u-u+ (acts by lam^2 + 2 lam); "
    "H^2 + u-u+ + u+u- is not central and is not used"
)


@dataclass
class Check:
    name: str
    status: str
    data: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "data": jsonable(self.data)}


def jsonable(x: Any) -> Any:
    if isinstance(x, (RatFunc, Fraction)):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Matrix):
        return x.to_strings()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# -- kernels and cokernels ------------------------------------------------------------

def kernel_stage(N: int, n: int) -> dict:
    """Kernel dimension law and closed-form generator match for Xi_N at truncation n."""
    ker = nullspace(xi(N, n))
    expected = max(0, n - N - 1)
    src = TruncatedModule(n - 1, N + 1, 1)
    gens = [kernel_generator(N).shift(q).coords(src) for q in range(expected)]
    match = span_basis(ker, src.dim) == span_basis(gens, src.dim)
    return {"N": N, "n": n, "kernel_dim": len(ker), "expected": expected, "generator_match": match}


def check_kernel_closed_form(N_max: int = 5, n_max: int = 8) -> Check:
    rows = []
    ok = True
    for N in range(N_max + 1):
        for n in range(N + 2, n_max + 1):
            r = kernel_stage(N, n)
            ok &= r["kernel_dim"] == r["expected"] and r["generator_match"]
            rows.append(r)
    return Check("kernel_closed_form", _status(ok), {"stages": rows})


def check_generator_identities(N_max: int = 5) -> Check:
    rows = []
    ok = True
    for N in range(N_max + 1):
        e = kernel_generator(N)
        m = TruncatedModule(N + 2, N + 1, 1)
        r = {
            "N": N,
            "xi_e_zero": xi_apply(N, e).is_zero(),
            "weight_minus_k_minus_2": act(H, e, m) == e.scale(-K - 2),
            "uplus_e_zero": act(UPLUS, e, m).is_zero(),
        }
        ok &= all(v for k, v in r.items() if k != "N")
        rows.append(r)
    return Check("generator_identities", _status(ok), {"generators": rows})


def witness_stage(N: int, n: int) -> dict:
    """Surjectivity of Xi_N at truncation n plus the recursion witness on every basis target."""
    surj = is_surjective(xi(N, n))
    tgt = TruncatedModule(n, N, 0)
    witnesses = 0
    ok = True
    for a, i, _ in tgt.basis:
        if a + (N - i) + 1 > n:
            continue
        target = PBWVector.basis_vector(a, i, 0)
        w = surjectivity_witness(N, n, target)
        ok &= xi_apply(N, w) == target
        qs = q_recursion(N, i, {a: 1})
        ok &= qs[i + 1] == {a: 1 / (K - i - 1)}
        for j in range(i + 1, N + 1):
            ok &= {b: c * (K - j - 1) for b, c in qs[j + 1].items()} == {b + 1: -c for b, c in qs[j].items()}
        ok &= all(w.terms.get((b, j, 1)) == c for j, Q in qs.items() for b, c in Q.items())
        ok &= len(w.terms) == sum(len(Q) for Q in qs.values())
        witnesses += 1
    return {"N": N, "n": n, "surjective": surj, "witnesses": witnesses, "witnesses_ok": ok}


def check_surjectivity(N_max: int = 5, n_max: int = 8) -> Check:
    rows = []
    ok = True
    for N in range(N_max + 1):
        for n in range(N + 1, n_max + 1):
            r = witness_stage(N, n)
            ok &= r["surjective"] and r["witnesses_ok"]
            rows.append(r)
    return Check("surjectivity", _status(ok), {"stages": rows})


# -- Casimir -------------------------------------------------------------------------------

def check_casimir(n_max: int = 8, s_max: int = 5, spectrum_s_max: int = 4) -> Check:
    central_ok = True
    checked = 0
    spectra = 0
    split_ok = True
    for n in range(n_max + 1):
        for s in range(s_max + 1):
            for j in (0, 1):
                m = TruncatedModule(n, s, j)
                res = centrality_check(m)
                checked += res.checked
                central_ok &= res.ok
                if s <= spectrum_s_max:
                    for t in m.weight_range:
                        if m.is_interior(t):
                            spectra += 1
                            split_ok &= spectrum_check(m, t).splits
    linked = central_character(K) == central_character(-K - 2)
    printed_central = commutes_with_uminus(printed_casimir_matrix, TruncatedModule(6, 1, 0), -1)
    data = {
        "commutator_squares_checked": checked,
        "centrality": central_ok,
        "spectra_checked": spectra,
        "charpoly_splits": split_ok,
        "chi_k_equals_chi_minus_k_minus_2": linked,
        "printed_form_central": printed_central,
        "note": CASIMIR_NOTE,
    }
    return Check("casimir", _status(central_ok and split_ok and linked), data)


def commutes_with_uminus(matrix_fn: Callable, m: TruncatedModule, t: int) -> bool:
    """Whether the operator given by ``matrix_fn`` commutes with u- from weight t to t-1."""
    g = operator_matrix(UMINUS, m, t)
    return matrix_fn(m, t - 1) @ g == g @ matrix_fn(m, t)


# -- the cut ---------------------------------------------------------------------------------

def cut_stage(n: int, s: int, chi=None, window=None) -> dict:
    chi = chi or central_character(K)
    c = build_B(n, s)
    cut = bgg_cut(c, chi, window)
    hc = homology(c)
    hw = homology(cut.windowed)
    hs = homology(cut.sub)
    hq = homology(cut.quotient)
    quasi = induced_on_homology(cut.sub_to_window, hs, hw).is_quasi_iso
    full_quasi = induced_on_homology(cut.inclusion, hs, hc).is_quasi_iso
    zero = induced_on_homology(cut.projection, hc, hq).is_zero_on_homology
    dual = dual_vanishing_check(cut.projection).ok if zero else False
    top = c.modules[1]
    ker = nullspace(c.d(1))
    deg1 = [cut.inclusion.at(1).column(j) for j in range(cut.sub.dim(1))]
    return {
        "n": n,
        "s": s,
        "window": [min(cut.window), max(cut.window)] if cut.window else [],
        "dims": c.dims,
        "window_dims": cut.windowed.dims,
        "sub_dims": cut.sub.dims,
        "quotient_dims": cut.quotient.dims,
        "homology": hc.dims,
        "sub_homology": hs.dims,
        "quotient_homology": hq.dims,
        "degree1_cut_is_kernel": span_basis(deg1, top.dim) == span_basis(ker, top.dim),
        "quasi_iso": quasi,
        "quotient_zero": zero,
        "dual_vanishing": dual,
        "full_inclusion_quasi_iso": full_quasi,
    }


def vanishing_stage(n: int, s: int) -> dict:
    """(U (x) V_s)_{chi_k} = 0 at every weight of U^{<=n} (x) V_s."""
    chi = central_character(K)
    m = TruncatedModule(n, s, 0)
    dims = {}
    for t in m.weight_range:
        big = TruncatedModule(max(n, complete_truncation(s, 0, t)), s, 0)
        dims[t] = len(generalized_eigenspace_coords(big, chi, t))
    return {"n": n, "s": s, "eigenspace_dims": dims, "vanishes": all(d == 0 for d in dims.values())}


def check_bgg_cut(n_range: Iterable[int] = range(2, 7), s_range: Iterable[int] = range(0, 4)) -> tuple[Check, list]:
    rows = []
    ok = True
    s_range = list(s_range)
    for n in n_range:
        for s in s_range:
            v = vanishing_stage(n, s)
            r = cut_stage(n, s)
            r["chi_k_vanishes_on_U_V"] = v["vanishes"]
            ok &= v["vanishes"] and r["degree1_cut_is_kernel"] and r["quasi_iso"] and r["quotient_zero"]
            rows.append(r)
    return Check("bgg_cut", _status(ok), {"stages": rows, "note": CASIMIR_NOTE}), rows


# -- duality -----------------------------------------------------------------------------------

def pairing_stage(n: int, s: int, seed: int) -> dict:
    c = build_B(n, s)
    hc, hd = homology(c), homology(dualize(c))
    out = {"n": n, "s": s, "degrees": {}}
    for d in (0, 1):
        p = homology_pairing(c, d, seed, hc, hd)
        out["degrees"][d] = {"gram": p.gram, "nondegenerate": p.nondegenerate, "well_defined": p.well_defined}
    if s >= 1:
        f = transition_maps(n, s - 1).restriction
        out["adjoint"] = {d: pairing_adjoint(f, d) for d in (0, 1)}
    return out


def check_duality(cut_rows: list | None = None, n_max: int = 5, s_max: int = 3, seed: int = 0) -> Check:
    ok = True
    dual_rows = []
    if cut_rows is None:
        _, cut_rows = check_bgg_cut()
    for r in cut_rows:
        dual_rows.append({"n": r["n"], "s": r["s"], "dual_vanishing": r["dual_vanishing"]})
        ok &= r["dual_vanishing"]
    pairs = []
    for n in range(1, n_max + 1):
        for s in range(s_max + 1):
            p = pairing_stage(n, s, seed)
            ok &= all(x["nondegenerate"] and x["well_defined"] for x in p["degrees"].values())
            ok &= all(p.get("adjoint", {}).values())
            pairs.append(p)
    return Check("duality", _status(ok), {"dual_vanishing": dual_rows, "pairings": pairs})


# -- sections and injectivity ------------------------------------------------------------------

def check_sections(n_max: int = 6, s_max: int = 4, n_inj: int = 5, s_values=(1, 2, 3)) -> Check:
    squares = []
    sq_ok = True
    for n in range(1, n_max + 1):
        for s in range(s_max + 1):
            r = section_squares(n, s)
            sq_ok &= r.ok
            squares.append({"n": n, "s": s, "fil_square": r.fil_square, "dual_square": r.dual_square,
                            "restriction_square": r.restriction_square,
                            "chain_section_defect_rank": r.chain_section_defect})
    inj = []
    inj_ok = True
    for s, s2 in itertools.combinations(s_values, 2):
        r = section_injectivity_check(n_inj, s, s2)
        inj_ok &= all(r.injective.values())
        inj.append({"s": s, "s_prime": s2, "injective": r.injective,
                    "source_homology": r.source_dims, "target_homology": r.target_dims})
    alpha = []
    for s in s_values:
        tm = transition_maps(n_inj, s)
        alpha.append({"s": s, "kernel_map_injective": tm.alpha_injective,
                      "kernel_map_surjective": tm.alpha_surjective})
    data = {"squares_commute": sq_ok, "squares": squares, "dual_transitions_injective": inj_ok,
            "injectivity": inj, "kernel_maps": alpha}
    return Check("sections_injectivity", _status(sq_ok and inj_ok), data)


# -- stabilization -------------------------------------------------------------------------------

def check_stabilization(m_max: int = 4, n_top: int = 8) -> Check:
    chi = central_character(K)
    ok = True
    rows = []
    for m in range(m_max + 1):
        for j in (0, 1):
            window = range(-2 - j, m - j + 1)
            table = stabilization_scan(m, j, chi, window, range(1, n_top + 1))
            stable = {}
            for t, dims in table.dims.items():
                tail = dims[m + 1:]  # n >= m + 2
                good = all(d is not None for d in tail) and len(set(tail)) <= 1
                ok &= good
                stable[t] = tail[0] if tail else None
            rows.append({"m": m, "j": j, "dims": table.dims, "onset": table.onset, "stable_value": stable})
    return Check("stabilization", _status(ok), {"scans": rows})


# -- oracle ------------------------------------------------------------------------------------------

def check_oracle(records: list, points: int = 3, seed: int = 0) -> Check:
    rep = oracle_check(records, points, seed)
    data = {"points": list(rep.points), "rank_checks": rep.checked,
            "mismatches": [list(m) for m in rep.mismatches]}
    return Check("specialization_oracle", _status(rep.ok), data)


# -- Weyl --------------------------------------------------------------------------------------------

WEYL_TYPES = (("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3))


def check_weyl(seed: int = 0, cases: int = 100) -> Check:
    A1 = root_system("A", 1)
    WA1 = generate_weyl(A1)
    orbit_ok = True
    for lam in [0, 1, 2, 3, 7, K]:
        orbit = sorted({str(dot_action(A1, w, [lam])[0]) for w in WA1})
        orbit_ok &= orbit == sorted({str(lam if not isinstance(lam, int) else lam), str(-lam - 2)})
    C2 = root_system("C", 2)
    hist = length_histogram(generate_weyl(C2))
    rng = random.Random(seed)
    groups = {t: (root_system(*t), generate_weyl(root_system(*t))) for t in WEYL_TYPES}
    assoc_ok = True
    for _ in range(cases):
        t = rng.choice(WEYL_TYPES)
        rs, W = groups[t]
        w1, w2 = rng.choice(W), rng.choice(W)
        lam = [rng.randint(-5, 5) for _ in range(rs.rank)]
        lhs = dot_action(rs, compose(rs, w1, w2), lam)
        rhs = dot_action(rs, w1, dot_action(rs, w2, lam))
        assoc_ok &= lhs == rhs
    cosets = []
    coset_ok = True
    for t in WEYL_TYPES:
        rs, W = groups[t]
        for size in range(rs.rank + 1):
            for par in itertools.combinations(range(1, rs.rank + 1), size):
                shape = bgg_shape(rs, par, [0] * rs.rank)
                expected = len(W) // _parabolic_order(rs, par, W)
                good = sum(shape.counts) == expected and shape.terms[0] == [tuple(RatFunc.const(0) for _ in range(rs.rank))]
                coset_ok &= good
                cosets.append({"type": f"{t[0]}{t[1]}", "parabolic": list(par), "counts": list(shape.counts),
                               "index": expected})
    data = {"a1_orbits": orbit_ok, "c2_histogram": list(hist), "associativity_cases": cases,
            "associativity": assoc_ok, "cosets": cosets, "coset_counts": coset_ok}
    ok = orbit_ok and hist == (1, 2, 2, 2, 1) and assoc_ok and coset_ok
    return Check("weyl_shapes", _status(ok), data)


def _parabolic_order(rs, par, W) -> int:
    """|W_M| by closing the simple reflections of M under composition."""
    gens = [simple_reflection(rs, i) for i in par]
    seen = {generate_identity(rs)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                x = compose(rs, g, w)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return len(seen)


# -- full suite -------------------------------------------------------------------------------------

def run_suite(oracle_points: int = 3, seed: int = 0, timer: Callable | None = None) -> list[Check]:
    """Run every acceptance check; ``timer(name, seconds)`` receives wall-clock times if given."""
    import time

    checks: list[Check] = []

    def timed(name, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        if timer is not None:
            timer(name, time.perf_counter() - t0)
        return out

    with rank_log() as log:
        checks.append(timed("kernel_closed_form", check_kernel_closed_form))
        checks.append(timed("generator_identities", check_generator_identities))
        checks.append(timed("surjectivity", check_surjectivity))
        checks.append(timed("casimir", check_casimir))
        cut_check, rows = timed("bgg_cut", check_bgg_cut)
        checks.append(cut_check)
        checks.append(timed("duality", check_duality, rows, seed=seed))
        checks.append(timed("sections_injectivity", check_sections))
        checks.append(timed("stabilization", check_stabilization))
    records = list(log)
    checks.append(timed("specialization_oracle", check_oracle, records, oracle_points, seed))
    checks.append(timed("weyl_shapes", check_weyl, seed))
    return checks
