from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qmqv.degeneration import (
    classical_limit_check,
    classical_moment,
    classical_relations,
    hbar_moment_check,
    hbar_vertex_moment,
)
from qmqv.freealg import gen_a, gen_d
from qmqv.relations import full_presentation
from qmqv.report import FAIL, INCONCLUSIVE, PASS

from .conftest import a2, calogero_moser, jordan, kron, star

h = sp.Symbol("h")
# t (q - q^-1) at q = e^h, t = h
S = h * (sp.exp(h) - sp.exp(-h))


def sympy_coeffs(expr, order):
    ser = sp.series(expr, h, 0, order + 1).removeO()
    return [Fraction(int(sp.Rational(ser.coeff(h, k)).p), int(sp.Rational(ser.coeff(h, k)).q)) for k in range(order + 1)]


def series_coeffs(hs, order):
    return [hs.coefficient(k).terms.get((), Fraction(0)) for k in range(order + 1)]


FIXTURES = [kron(1, 1), kron(1, 2), kron(2, 1), kron(2, 2), jordan(1), jordan(2), jordan(3), calogero_moser(1),
            calogero_moser(2), star(2), a2()]


# -- q = 1


@pytest.mark.parametrize("quiver", FIXTURES)
@pytest.mark.parametrize("kind", ["Oq", "Dq"])
def test_classical_limit_all_fixtures(quiver, kind):
    assert classical_limit_check(full_presentation(quiver, kind)).status == PASS


def test_quantum_plane_limit():
    p = full_presentation(kron(1, 2), "Oq")
    x1, x2 = gen_a("e", 0, 1, 1), gen_a("e", 0, 1, 2)
    got = {k: v.evaluate(1) for k, v in p.relations[0].specialize(1).terms.items()}
    assert got == {(x1, x2): -1, (x2, x1): 1}


def test_kronecker_11_weyl():
    p = full_presentation(kron(1, 1), "Dq")
    a, d = gen_a("e", 0, 1, 1), gen_d("e", 0, 1, 1)
    want = {(d, a): 1, (a, d): -1, (): -1}
    assert {k: v.evaluate(1) for k, v in p.relations[0].specialize(1).terms.items()} == want
    assert {k: v.evaluate(1) for k, v in classical_relations(p, "ad:e")[0].items()} == want


@pytest.mark.parametrize("n, count", [(2, 16), (3, 81)])
def test_jordan_cross_become_commutators(n, count):
    p = full_presentation(jordan(n), "Dq")
    assert p.family_counts()["ad:l"] == count
    expected = classical_relations(p, "ad:l")
    assert len(expected) == count and all(() not in r for r in expected)


def test_classical_limit_detects_wrong_constant():
    p = full_presentation(kron(1, 1), "Dq")
    p.relations[0] = p.relations[0] + 1
    r = classical_limit_check(p)
    assert r.status == FAIL and r.witness["family"] == "ad:e"


def test_localized_families_skipped():
    from qmqv.moment import moment_presentation

    r = classical_limit_check(moment_presentation(kron(1, 1)))
    assert r.status == PASS and r.details["skipped"]


# -- q = e^h


def test_beta_vertex_series_matches_sympy():
    M = hbar_vertex_moment(kron(1, 1), "v", order=4)
    d, a = gen_d("e", 0, 1, 1), gen_a("e", 0, 1, 1)
    entry = M[(1, 1)]
    assert series_coeffs(entry[()], 4) == [1, 0, 0, 0, 0]
    assert series_coeffs(entry[(d, a)], 4) == sympy_coeffs(S, 4)


def test_alpha_vertex_inverse_series():
    M = hbar_vertex_moment(kron(1, 1), "u", order=4)
    d, a = gen_d("e", 0, 1, 1), gen_a("e", 0, 1, 1)
    entry = M[(1, 1)]
    # (1 + s X)^-1 = 1 - s X + s^2 X^2 - ...
    assert series_coeffs(entry[(a, d)], 4) == sympy_coeffs(-S, 4)
    assert series_coeffs(entry[(a, d, a, d)], 4) == sympy_coeffs(S ** 2, 4)


def test_sign_test():
    r = hbar_moment_check(kron(1, 1))
    assert r.status == PASS
    v = r.details["vertices"]
    assert v["v"]["1,1"]["h2"] == "(-L_v) + (2)*d[e]^1_1.a[e]^1_1"
    assert v["u"]["1,1"]["h2"] == "(-L_u) + (-2)*a[e]^1_1.d[e]^1_1"


def test_additivity_at_star_node():
    q = star(2)
    M = hbar_vertex_moment(q, "v0", order=3)[(1, 1)]
    d1, a1 = gen_d("e10", 0, 1, 1), gen_a("e10", 0, 1, 1)
    d2, a2_ = gen_d("e20", 1, 1, 1), gen_a("e20", 1, 1, 1)
    assert M[(d1, a1)].coefficient(2).terms == {(): 2}
    assert M[(d2, a2_)].coefficient(2).terms == {(): 2}
    # the cross product of the two edge factors starts at h^4
    cross = M.get((d1, a1, d2, a2_))
    assert cross is None or all(cross.coefficient(k).is_zero() for k in range(4))
    cl = classical_moment(q, "v0")
    assert set(cl.entries[(1, 1)]) == {(d1, a1), (d2, a2_)}


@pytest.mark.parametrize("quiver", [kron(1, 1), kron(1, 2), kron(2, 1), kron(2, 2), star(2), a2()])
def test_hbar_check_loop_free(quiver):
    r = hbar_moment_check(quiver)
    assert r.status == PASS, r.witness


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=5), st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_hbar_check_numeric_lambdas(lu, lv):
    assert hbar_moment_check(kron(1, 2), {"u": lu, "v": lv}).status == PASS


def test_t_zero_lambda_zero_vanishes():
    r = hbar_moment_check(kron(1, 1), {"u": 0, "v": 0}, t=0)
    assert r.status == PASS
    assert all(e["h2"] == "0" for v in r.details["vertices"].values() for e in v.values())


def test_t_one_fails_at_first_order():
    r = hbar_moment_check(kron(1, 1), t=1)
    assert r.status == FAIL and r.witness["order"] == 1


def test_loops_refused():
    r = hbar_moment_check(calogero_moser(1))
    assert r.status == INCONCLUSIVE and "unsupported" in r.details["reason"]
    with pytest.raises(ValueError):
        hbar_vertex_moment(jordan(1), "v")
