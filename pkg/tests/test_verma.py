import pytest
from hypothesis import given, strategies as st

from bgglab.complexes import kernel_generator
from bgglab.exactfield import K, ZERO, rf
from bgglab.linalg import Matrix, span_basis
from bgglab.sl2core import H, UMINUS, UPLUS
from bgglab.verma import (
    PBWVector,
    TruncatedModule,
    TruncationEscape,
    act,
    casimir_apply,
    casimir_matrix,
    central_character,
    centrality_check,
    characters_of,
    complete_truncation,
    filtration_is_stable,
    generalized_eigenspace,
    generalized_eigenspace_coords,
    linkage,
    operator_matrix,
    printed_casimir_matrix,
    spectrum_check,
    stabilization_scan,
    verma_filtration,
    weight_spaces,
)

CHI_K = central_character(K)
bv = PBWVector.basis_vector


# -- actions ------------------------------------------------------------------------------------

def test_weight_of_wedge_vector():
    m = TruncatedModule(3, 1, 1)
    v = bv(1, 0, 1)
    assert act(H, v, m) == v.scale(-K - 4)


def test_uplus_commutation_example():
    m = TruncatedModule(3, 1, 0)
    got = act(UPLUS, bv(1, 0, 0), m)
    assert got == bv(1, 1, 0, -K / (K - 1)) + bv(0, 0, 0, -K)


def test_uminus_is_left_multiplication():
    m = TruncatedModule(2, 0, 0)
    assert act(UMINUS, bv(0, 0, 0), m) == bv(1, 0, 0)


def test_strict_action_refuses_to_leave_truncation():
    m = TruncatedModule(2, 0, 0)
    assert act(UMINUS, bv(2, 0, 0), m) == bv(3, 0, 0)
    with pytest.raises(TruncationEscape):
        act(UMINUS, bv(2, 0, 0), m, strict=True)


@pytest.mark.parametrize("n,s,j", [(4, 2, 0), (3, 3, 1), (5, 1, 1)])
def test_weights_are_additive(n, s, j):
    m = TruncatedModule(n, s, j)
    for b in m.basis:
        t = m.weight_index(b)
        v = PBWVector({b: 1})
        assert act(H, v, m) == v.scale(-K + 2 * t)
        for g, dt in ((UPLUS, 1), (UMINUS, -1)):
            for b2 in act(g, v, m).terms:
                assert m.weight_index(b2) == t + dt


# -- weight spaces -------------------------------------------------------------------------------

def test_weight_space_examples():
    ws = weight_spaces(TruncatedModule(2, 1, 0))
    assert set(ws[-1]) == {(1, 0, 0), (2, 1, 0)}
    assert ws[1] == [(0, 1, 0)]


@given(st.integers(0, 6), st.integers(0, 5), st.integers(0, 1))
def test_weight_spaces_partition_basis(n, s, j):
    m = TruncatedModule(n, s, j)
    ws = weight_spaces(m)
    flat = [b for bs in ws.values() for b in bs]
    assert sorted(flat) == sorted(m.basis)
    assert len(flat) == len(set(flat))
    assert set(ws) <= set(m.weight_range)


# -- Casimir ---------------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [K, -K - 2, -K + 2, rf(3)])
def test_casimir_on_highest_weight_vector(lam):
    # on a vector killed by u+ with H-eigenvalue lam: H^2 + 2H + 4u-u+ = lam^2 + 2 lam
    assert central_character(lam).value == lam * lam + 2 * lam


@pytest.mark.parametrize("s", range(5))
def test_top_weight_space_is_singular(s):
    m = TruncatedModule(3, s, 0)
    lam = -K + 2 * s
    assert casimir_matrix(m, s) == Matrix([[lam * lam + 2 * lam]])


def test_central_character_examples():
    assert central_character(K).value == K * K + 2 * K
    assert central_character(-K - 2).value == K * K + 2 * K
    assert central_character(-K + 2).value == K * K - 6 * K + 8
    with pytest.raises(ValueError):
        central_character(2 * K)
    with pytest.raises(ValueError):
        central_character(K * K)


def test_linkage_examples():
    assert linkage(-K - 2, K)
    assert not linkage(-K + 2, K)
    assert linkage(-K + 4, -K + 4)


@pytest.mark.parametrize("n,s", [(n, s) for n in range(0, 9) for s in range(0, 6)])
def test_centrality(n, s):
    for j in (0, 1):
        res = centrality_check(TruncatedModule(n, s, j))
        assert res.ok, res.failures


@pytest.mark.parametrize("s", range(5))
def test_spectrum_splits(s):
    for j in (0, 1):
        m = TruncatedModule(s + 2, s, j)
        for t in m.weight_range:
            if m.is_interior(t):
                assert spectrum_check(m, t).splits


def test_printed_symmetric_form_is_not_central():
    m = TruncatedModule(6, 1, 0)
    g = operator_matrix(UMINUS, m, -1)
    assert printed_casimir_matrix(m, -2) @ g != g @ printed_casimir_matrix(m, -1)
    assert casimir_matrix(m, -2) @ g == g @ casimir_matrix(m, -1)


def test_casimir_refuses_boundary_weights():
    m = TruncatedModule(2, 2, 0)
    assert not m.is_interior(-1)
    with pytest.raises(TruncationEscape):
        casimir_matrix(m, -1)


# -- characters and eigenspaces ----------------------------------------------------------------

def test_characters_of_examples():
    two = characters_of(TruncatedModule(3, 1, 0))
    assert [c.value for c in two] == [K * K - 2 * K, K * K - 6 * K + 8]
    assert [c.value for c in characters_of(TruncatedModule(3, 0, 1))] == [K * K + 2 * K]


@pytest.mark.parametrize("n,s", [(n, s) for n in range(1, 7) for s in range(0, 4)])
def test_chi_k_vanishes_on_u_tensor_v(n, s):
    for t in TruncatedModule(n, s, 0).weight_range:
        big = TruncatedModule(max(n, complete_truncation(s, 0, t)), s, 0)
        assert generalized_eigenspace(big, CHI_K, t) == []


@pytest.mark.parametrize("N", range(0, 4))
def test_wedge_eigenspace_is_kernel_generator(N):
    m = TruncatedModule(N + 2, N + 1, 1)
    space = generalized_eigenspace(m, CHI_K, -1)
    assert len(space) == 1
    src = weight_spaces(m)[-1]
    assert span_basis([space[0].coords(m, src)], len(src)) == span_basis(
        [kernel_generator(N).coords(m, src)], len(src))


def test_absent_character_gives_empty_eigenspaces():
    m = TruncatedModule(4, 2, 0)
    chi = central_character(-K + 11)
    assert chi not in characters_of(m)
    for t in m.weight_range:
        if m.is_interior(t):
            assert generalized_eigenspace_coords(m, chi, t) == []


@pytest.mark.parametrize("n,s,j", [(4, 2, 0), (5, 2, 1), (4, 3, 0)])
def test_generalized_eigenspaces_decompose_weight_spaces(n, s, j):
    m = TruncatedModule(n, s, j)
    for t in m.weight_range:
        if not m.is_interior(t):
            continue
        dim = len(weight_spaces(m)[t])
        total = sum(len(generalized_eigenspace_coords(m, c, t)) for c in characters_of(m))
        assert total == dim


def test_casimir_apply_matches_matrix():
    m = TruncatedModule(4, 2, 0)
    t = 0
    src = weight_spaces(m)[t]
    omega = casimir_matrix(m, t)
    for col, b in enumerate(src):
        img = casimir_apply(PBWVector({b: 1}), m)
        assert img.coords(m, src) == omega.column(col)


# -- filtration and stabilization ---------------------------------------------------------------

def test_verma_filtration_ordering():
    f = verma_filtration([-K, -K + 2])
    assert f.ordering == (-K + 2, -K)
    single = verma_filtration([K])
    assert single.ordering == (K,)
    for n, (graded, expected) in f.total_dims.items():
        assert graded == expected == 2 * (n + 1)


def test_verma_filtration_rejects_mixed_slopes():
    with pytest.raises(ValueError):
        verma_filtration([K, -K])


@pytest.mark.parametrize("s", range(5))
def test_filtration_steps_are_borel_stable(s):
    assert filtration_is_stable(s, 0) and filtration_is_stable(s, 1)


def test_stabilization_examples():
    wedge = stabilization_scan(1, 1, CHI_K, [-1], range(2, 7))
    assert wedge.dims[-1][-1] == 1 and wedge.onset[-1] is not None
    plain = stabilization_scan(1, 0, CHI_K, range(-2, 2), range(2, 7))
    assert all(d in (0, None) for row in plain.dims.values() for d in row)
    other = stabilization_scan(1, 1, central_character(-K + 9), range(-2, 1), range(2, 7))
    assert all(d in (0, None) for row in other.dims.values() for d in row)


def test_complete_truncation():
    assert complete_truncation(3, 0, -2) == 5
    assert complete_truncation(3, 1, 3) == 0
    m = TruncatedModule(complete_truncation(3, 1, -1), 3, 1)
    assert m.is_interior(-1) and not TruncatedModule(m.n - 1, 3, 1).is_interior(-1)
    assert ZERO.is_zero()
