from itertools import product

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qmqv.coeff import RatQ
from qmqv.equivariance import act, act_on_word, dual_rep, letter_factors, vector_rep, vertex_reps
from qmqv.freealg import gen_a, gen_d

from .conftest import kron
from .test_coeff import to_sympy
from .test_freealg import sympy_r

q = sp.Symbol("q")
ONE = RatQ.coerce(1)


def rep_matrix(m: dict, N: int) -> sp.Matrix:
    return sp.Matrix(N, N, lambda r, c: to_sympy(m.get((r + 1, c + 1), RatQ.coerce(0))))


def oracle_plus(N: int):
    """rho(l^{+i}_j) with (b, a) entry R^{ai}_{bj}, straight from the R formula."""
    R = sympy_r(N)
    idx = {ij: n for n, ij in enumerate(product(range(1, N + 1), repeat=2))}
    return {(i, j): sp.Matrix(N, N, lambda b, a: R[idx[(a + 1, i)], idx[(b + 1, j)]])
            for i, j in product(range(1, N + 1), repeat=2)}


@pytest.mark.parametrize("N", [1, 2, 3])
def test_vector_rep_matches_formula(N):
    got = vector_rep(N, "+")
    want = oracle_plus(N)
    for ij in want:
        assert sp.simplify(rep_matrix(got[ij], N) - want[ij]) == sp.zeros(N)


@pytest.mark.parametrize("sign", ["+", "-"])
def test_q1_is_trivial(sign):
    rep = vertex_reps(2, sign, q0=1)
    for (i, j), m in rep[False].items():
        assert m == ({(1, 1): ONE, (2, 2): ONE} if i == j else {})


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("sign", ["+", "-"])
def test_dual_is_antipode(N, sign):
    rep = vector_rep(N, sign)
    dual = dual_rep(rep, N)
    rng = range(1, N + 1)
    for i, j in product(rng, repeat=2):
        s = sp.zeros(N)
        for k in rng:
            s += rep_matrix(rep[(i, k)], N) * rep_matrix(dual[(k, j)], N).T
        assert sp.simplify(s - (sp.eye(N) if i == j else sp.zeros(N))) == sp.zeros(N)


def test_bad_sign():
    with pytest.raises(ValueError):
        vector_rep(2, "x")


def test_letter_factors():
    Q = kron(2, 3)
    assert letter_factors(Q, gen_a("e", 0, 1, 2)) == (("u", True, 1), ("v", False, 2))
    assert letter_factors(Q, gen_d("e", 0, 3, 1)) == (("v", True, 3), ("u", False, 1))


def test_empty_word_counit():
    Q = kron(2, 2)
    reps = vertex_reps(2, "+")
    assert act_on_word(Q, "v", reps, 1, 1, ()) == {(): ONE}
    assert act_on_word(Q, "v", reps, 1, 2, ()) == {}


def test_quantum_plane_action_oracle():
    # the q-antisymmetric line x2 x1 - q^-1 x1 x2 is stable under every l^{+i}_j
    Q = kron(1, 2)
    L = oracle_plus(2)
    x = {j: gen_a("e", 0, 1, j) for j in (1, 2)}
    words = [(x[a], x[b]) for a, b in product((1, 2), repeat=2)]
    r = sp.Matrix([0, -1 / q, 1, 0])  # coordinates on x1x1, x1x2, x2x1, x2x2
    reps = vertex_reps(2, "+")
    for i, j in product((1, 2), repeat=2):
        T = sum((sp.kronecker_product(L[(i, k)], L[(k, j)]) for k in (1, 2)), sp.zeros(4))
        img = sp.simplify(T * r)
        assert sp.simplify(img[0]) == 0 and sp.simplify(img[3]) == 0
        assert sp.simplify(img[1] * r[2] - img[2] * r[1]) == 0
        # the package action agrees with the oracle column by column
        for col, w in enumerate(words):
            got = act_on_word(Q, "v", reps, i, j, w)
            for row, w2 in enumerate(words):
                assert sp.simplify(to_sympy(got.get(w2, RatQ.coerce(0))) - T[row, col]) == 0


letters22 = st.sampled_from([gen_a("e", 0, i, j) for i in (1, 2) for j in (1, 2)] +
                            [gen_d("e", 0, i, j) for i in (1, 2) for j in (1, 2)])


@settings(max_examples=20, deadline=None)
@given(st.lists(letters22, min_size=1, max_size=2), st.lists(letters22, min_size=1, max_size=2),
       st.sampled_from(["u", "v"]), st.integers(1, 2), st.integers(1, 2))
def test_action_is_comultiplicative(u, w, vertex, i, j):
    Q = kron(2, 2)
    reps = vertex_reps(2, "+", q0=3)
    whole = act_on_word(Q, vertex, reps, i, j, tuple(u) + tuple(w))
    split: dict = {}
    for k in (1, 2):
        for w1, c1 in act_on_word(Q, vertex, reps, i, k, tuple(u)).items():
            for w2, c2 in act_on_word(Q, vertex, reps, k, j, tuple(w)).items():
                split[w1 + w2] = split.get(w1 + w2, RatQ.coerce(0)) + c1 * c2
    assert {k: v for k, v in split.items() if not v.is_zero()} == whole


def test_act_is_linear():
    Q = kron(1, 2)
    reps = vertex_reps(2, "-")
    x1, x2 = gen_a("e", 0, 1, 1), gen_a("e", 0, 1, 2)
    a = act(Q, "v", reps, 2, 1, {(x1,): ONE})
    b = act(Q, "v", reps, 2, 1, {(x2,): ONE})
    both = act(Q, "v", reps, 2, 1, {(x1,): ONE, (x2,): ONE})
    merged = dict(a)
    for k, v in b.items():
        merged[k] = merged.get(k, RatQ.coerce(0)) + v
    assert both == {k: v for k, v in merged.items() if not v.is_zero()}
