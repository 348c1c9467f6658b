import itertools

import pytest
from hypothesis import given, strategies as st

from bgglab.exactfield import K, ONE, ZERO, rf
from bgglab.sl2core import (
    GENERATORS,
    H,
    UMINUS,
    UPLUS,
    DualBasisElement,
    DualVector,
    InducedElement,
    act_dual,
    act_induced,
    bracket,
    dual_basis,
    dual_pairing,
    dual_scale,
    fil_project,
    monomial,
    transition_restrict,
    transition_uminus,
)


def e(N, i):
    return DualBasisElement(N, i)


def commutator(action, g1, g2, v):
    return action(g1, action(g2, v)) - action(g2, action(g1, v))


def bracket_image(action, g1, g2, v, zero):
    c, g = bracket(g1, g2)
    return zero if g is None else action(g, v).scale(c)


# -- induced module ------------------------------------------------------------------------

def test_induced_action_examples():
    assert act_induced(UMINUS, monomial(2)) == monomial(3, K - 2)
    assert act_induced(H, monomial(0)) == monomial(0, K)
    assert act_induced(UPLUS, monomial(0)).is_zero()


def test_bracket_table():
    assert bracket(H, UPLUS) == (2, UPLUS)
    assert bracket(H, UMINUS) == (-2, UMINUS)
    assert bracket(UPLUS, UMINUS) == (1, H)
    assert bracket(UMINUS, UPLUS) == (-1, H)
    assert bracket(H, H)[0] == 0


@pytest.mark.parametrize("n", range(9))
def test_bracket_fidelity_on_induced(n):
    v = monomial(n)
    for g1, g2 in itertools.product(GENERATORS, repeat=2):
        assert commutator(act_induced, g1, g2, v) == bracket_image(act_induced, g1, g2, v, InducedElement())


def test_fil_project_examples():
    v = monomial(0) + monomial(3)
    assert fil_project(v, 2) == monomial(0)
    w = monomial(1, K) + monomial(2)
    assert fil_project(w, 2) == w
    with pytest.raises(ValueError):
        fil_project(w, -1)


@given(st.dictionaries(st.integers(0, 8), st.integers(-5, 5)), st.integers(0, 8), st.integers(0, 8))
def test_fil_project_nesting(coeffs, a, b):
    v = InducedElement(coeffs)
    assert fil_project(fil_project(v, a), b) == fil_project(v, min(a, b))


# -- dual modules ------------------------------------------------------------------------------

def test_dual_weight_example():
    assert act_dual(H, e(2, 1)) == e(2, 1).vector().scale(-K + 2)


def test_dual_uplus_in_rescaled_basis():
    # the dual basis here pairs as <e_{N,i}, X^k Y^i> = (k-i)/k
    assert act_dual(UPLUS, e(2, 0)) == e(2, 1).vector().scale(-K / (K - 1))
    assert act_dual(UPLUS, e(2, 2)).is_zero()


def test_dual_uminus_bottom_vanishes():
    assert act_dual(UMINUS, e(2, 0)).is_zero()


@pytest.mark.parametrize("N", range(1, 7))
def test_rescaling_conjugates_literal_dual_uplus(N):
    # in the literal dual basis f_i the raising operator is f_i -> -(i+1) f_{i+1}
    for i in range(N):
        literal = rf(-(i + 1))
        assert act_dual(UPLUS, e(N, i)).coefficient(i + 1) == literal * dual_scale(i) / dual_scale(i + 1)


@pytest.mark.parametrize("N", range(0, 9))
def test_contragredient_pairing(N):
    # (g phi)(x) = -phi(g x) whenever g x stays in Fil_N
    for i, n in itertools.product(range(N + 1), repeat=2):
        x = monomial(n)
        for g in GENERATORS:
            gx = act_induced(g, x)
            if gx.degree > N:
                continue
            assert dual_pairing(act_dual(g, e(N, i)), x) == -dual_pairing(e(N, i), gx)


@pytest.mark.parametrize("N", range(0, 9))
def test_bracket_fidelity_on_dual_below_top(N):
    # the top vector e_{N,N} is excluded: V_N is a quotient of a dual, not an sl2-module there
    zero = DualVector(N)
    for i in range(N):
        for g1, g2 in itertools.product(GENERATORS, repeat=2):
            v = e(N, i).vector()
            assert commutator(act_dual, g1, g2, v) == bracket_image(act_dual, g1, g2, v, zero)


@pytest.mark.parametrize("N", range(1, 9))
def test_top_dual_vector_breaks_uplus_uminus_bracket(N):
    v = e(N, N).vector()
    assert commutator(act_dual, UPLUS, UMINUS, v) != act_dual(H, v)


@given(st.integers(0, 8), st.data())
def test_dual_weights_are_additive(N, data):
    i = data.draw(st.integers(0, N))
    v = e(N, i)
    up = act_dual(UPLUS, v)
    for j, c in up.coeffs.items():
        assert j == i + 1
    down = act_dual(UMINUS, v)
    for j, c in down.coeffs.items():
        assert j == i - 1
        assert act_dual(H, e(N, j)) == e(N, j).vector().scale(-K + 2 * i - 2)


# -- transitions --------------------------------------------------------------------------------

def test_transition_uminus_examples():
    assert transition_uminus(e(3, 2)) == e(2, 1).vector().scale(-K + 2)
    assert transition_uminus(e(5, 0)).is_zero()
    assert transition_uminus(e(1, 1)) == e(0, 0).vector().scale(-K + 1)


def test_transition_restrict_examples():
    assert transition_restrict(e(3, 1)) == e(2, 1).vector()
    assert transition_restrict(e(3, 3)).is_zero()


@pytest.mark.parametrize("i", range(4))
def test_restriction_composite(i):
    two_steps = transition_restrict(transition_restrict(e(3, i)))
    direct = e(1, i).vector() if i <= 1 else DualVector(1)
    assert two_steps == direct


@pytest.mark.parametrize("N", range(0, 7))
def test_transition_uminus_shifts_weight(N):
    for b in dual_basis(N + 1):
        lhs = act_dual(H, transition_uminus(b))
        rhs = transition_uminus(act_dual(H, b)) - transition_uminus(b).scale(2)
        assert lhs == rhs


@pytest.mark.parametrize("N", range(0, 7))
def test_transition_uminus_is_restricted_contragredient(N):
    # u-: V_{N+1} -> V_N agrees with the dual action followed by restriction
    for b in dual_basis(N + 1):
        assert transition_uminus(b) == transition_restrict(act_dual(UMINUS, b))


def test_dual_basis_rejects_bad_index():
    with pytest.raises(ValueError):
        DualBasisElement(2, 3)
    with pytest.raises(ValueError):
        DualVector(1, {2: ONE})
    assert dual_pairing(e(2, 1), monomial(1)) == (K - 1) / K
    assert dual_pairing(e(2, 1), monomial(2)) == ZERO
