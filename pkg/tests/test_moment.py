import pytest

from qmqv.coeff import QDIFF, LaurentQ, RatQ
from qmqv.freealg import NCPoly, gen_a, gen_d, gen_inv
from qmqv.moment import (
    CharacterSpec,
    MomentError,
    character_check,
    edge_moment_alpha,
    edge_moment_alpha_bar,
    edge_moment_beta,
    edge_moment_loop,
    moment_ideal_generators,
    moment_presentation,
    vertex_moment,
)
from qmqv.relations import full_presentation
from qmqv.report import PASS
from qmqv.verify import DegreeSpan, reflection_check

from .conftest import calogero_moser, jordan, kron, star

QD = RatQ.coerce(QDIFF)


def a(e, i, j, pos=0):
    return NCPoly.gen(gen_a(e, pos, i, j))


def d(e, i, j, pos=0):
    return NCPoly.gen(gen_d(e, pos, i, j))


def entry(M, i, j):
    x = M.entries[(i,), (j,)]
    return x if isinstance(x, NCPoly) else NCPoly.const(x)


def test_beta_d1_is_g():
    M = edge_moment_beta(kron(1, 1), "e")
    assert M.vertex == "v" and M.dim == 1
    assert entry(M, 1, 1) == NCPoly.const(1) + (d("e", 1, 1) * a("e", 1, 1)).scale(QD)


def test_beta_d2_off_diagonal():
    M = edge_moment_beta(kron(2, 2), "e")
    assert entry(M, 1, 2) == (d("e", 1, 1) * a("e", 1, 2) + d("e", 1, 2) * a("e", 2, 2)).scale(QD)


def test_alpha_bar_d2_diagonal():
    M = edge_moment_alpha_bar(kron(2, 2), "e")
    assert M.vertex == "u"
    assert entry(M, 1, 1) == NCPoly.const(1) + (a("e", 1, 1) * d("e", 1, 1) + a("e", 1, 2) * d("e", 2, 1)).scale(QD)


@pytest.mark.parametrize("dims", [(1, 1), (2, 2), (1, 3)])
def test_t_zero_is_identity(dims):
    q = kron(*dims)
    for M in (edge_moment_beta(q, "e", t=0), edge_moment_alpha_bar(q, "e", t=0)):
        assert (M.entries - type(M.entries).identity((M.dim,))).is_zero()


def test_loop_refusals():
    with pytest.raises(MomentError):
        edge_moment_beta(jordan(1), "l")
    with pytest.raises(MomentError, match="unsupported"):
        edge_moment_loop(jordan(2), "l", moment_presentation(jordan(2)))
    with pytest.raises(MomentError, match="unsupported"):
        vertex_moment(jordan(2), "v")


def test_loop_moment_is_q_squared():
    q = jordan(1)
    p = moment_presentation(q)
    mu = entry(edge_moment_loop(q, "l", p), 1, 1)
    span = DegreeSpan(p, 6)
    assert not span.reduce(mu - NCPoly.const(RatQ.coerce(LaurentQ.monomial(2))))
    # classical limit of the constant
    assert RatQ.coerce(LaurentQ.monomial(2)).evaluate(1) == 1


def test_tail_map_needs_presentation_inverse():
    q = kron(1, 1)
    with pytest.raises(MomentError):
        edge_moment_alpha(q, "e", full_presentation(q, "Dq"))
    M = edge_moment_alpha(q, "e", moment_presentation(q))
    assert entry(M, 1, 1) == NCPoly.gen(gen_inv("gbar:e"))


def test_single_edge_vertex_equals_edge_map():
    q = kron(2, 2)
    assert (vertex_moment(q, "v").entries - edge_moment_beta(q, "e").entries).is_zero()


def test_two_edge_node_is_product():
    q = star(2)
    g1 = NCPoly.const(1) + (d("e10", 1, 1, 0) * a("e10", 1, 1, 0)).scale(QD)
    g2 = NCPoly.const(1) + (d("e20", 1, 1, 1) * a("e20", 1, 1, 1)).scale(QD)
    assert entry(vertex_moment(q, "v0"), 1, 1) == g1 * g2


def test_calogero_moser_node_composition():
    q = calogero_moser(1)
    p = moment_presentation(q)
    g = NCPoly.const(1) + (d("e", 1, 1, 0) * a("e", 1, 1, 0)).scale(QD)
    loop = d("l", 1, 1, 1) * NCPoly.gen(gen_inv("a:l")) * NCPoly.gen(gen_inv("d:l")) * a("l", 1, 1, 1)
    assert entry(vertex_moment(q, "v", p), 1, 1) == g * loop


def test_node_product_satisfies_reflection():
    q = star(2)
    p = moment_presentation(q)
    assert reflection_check(vertex_moment(q, "v0", p), p, 4).status == PASS


def test_moment_ideal_generators():
    q = kron(1, 1)
    gens = moment_ideal_generators(q, CharacterSpec({"u": 1, "v": 1}))
    assert gens[1] == (d("e", 1, 1) * a("e", 1, 1)).scale(QD)
    assert len(moment_ideal_generators(calogero_moser(1), CharacterSpec({"u": 1, "v": 1}))) == 2
    with pytest.raises(MomentError):
        moment_ideal_generators(kron(2, 2), CharacterSpec())


def test_character_spec_rejects_zero():
    with pytest.raises(ValueError):
        CharacterSpec({"v": RatQ.coerce(0)})


@pytest.mark.parametrize("N", [1, 2, 3])
def test_character_symbolic(N):
    assert character_check(N).status == PASS


@pytest.mark.parametrize("rho", [1, 3])
def test_character_numeric(rho):
    assert character_check(2, rho).status == PASS
