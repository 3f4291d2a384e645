"""Quantum moment map data: edge maps, vertex maps, trace characters and the
generators of the moment ideal.

Matrices follow the same convention as the relation generator: an
``AlgMatrix`` entry ``[i, j]`` is the image of ``l^i_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .coeff import QDIFF, LaurentQ, RatQ
from .freealg import AlgMatrix, NCPoly, build_r_matrix, gen_inv
from .quiver import Edge, Quiver
from .relations import (
    Presentation,
    a_matrix,
    adjoin_inverses,
    d_matrix,
    full_presentation,
)
from .report import FAIL, PASS, CheckReport, timed


class MomentError(ValueError):
    """Requested moment map is outside the supported range."""


@dataclass
class MomentMatrix:
    vertex: str
    entries: AlgMatrix
    label: str = ""

    @property
    def dim(self) -> int:
        return self.entries.rows


@dataclass
class CharacterSpec:
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        for v, x in self.values.items():
            if isinstance(x, RatQ) and x.is_zero():
                raise ValueError(f"character value at {v!r} must be nonzero")


def _edge(q: Quiver, e) -> Edge:
    return e if isinstance(e, Edge) else q.edge(e)


def _scalar(t) -> RatQ:
    return RatQ.coerce(t) * RatQ.coerce(QDIFF)


def edge_moment_beta(q: Quiver, e, t=1) -> MomentMatrix:
    """M = I + t (q - q^-1) D A at the head of a non-loop edge."""
    e = _edge(q, e)
    if e.is_loop:
        raise MomentError(f"edge {e.id!r} is a loop")
    D, A = d_matrix(q, e), a_matrix(q, e)
    M = AlgMatrix.identity((q.dim(e.tgt),)) + (D @ A).scale(_scalar(t))
    return MomentMatrix(e.tgt, M, f"beta:{e.id}")


def edge_moment_alpha_bar(q: Quiver, e, t=1) -> MomentMatrix:
    """M-bar = I + t (q - q^-1) A D at the tail; the moment map is its inverse."""
    e = _edge(q, e)
    if e.is_loop:
        raise MomentError(f"edge {e.id!r} is a loop")
    A, D = a_matrix(q, e), d_matrix(q, e)
    M = AlgMatrix.identity((q.dim(e.src),)) + (A @ D).scale(_scalar(t))
    return MomentMatrix(e.src, M, f"alpha_bar:{e.id}")


# ---------------------------------------------------------------------------
# localization needed by the scalar moment maps


def inverse_tag(kind: str, e: Edge) -> str:
    return f"{kind}:{e.id}"


def moment_presentation(q: Quiver, base: Presentation | None = None) -> Presentation:
    """D_q with the scalar inverses that vertex moment maps require.

    Tail of a non-loop edge with d = 1: the inverse of 1 + (q - q^-1) a d.
    Loop with d = 1: inverses of a and d.  Larger dimensions are left alone
    (their moment maps are refused by ``vertex_moment``).
    """
    p = base or full_presentation(q, "Dq")
    targets, tags = [], []
    for e in q.edges:
        if e.is_loop:
            if q.dim(e.src) == 1:
                A, D = a_matrix(q, e), d_matrix(q, e)
                targets += [A[(1,), (1,)], D[(1,), (1,)]]
                tags += [inverse_tag("a", e), inverse_tag("d", e)]
        elif q.dim(e.src) == 1:
            Mb = edge_moment_alpha_bar(q, e).entries
            targets.append(Mb[(1,), (1,)])
            tags.append(inverse_tag("gbar", e))
    return adjoin_inverses(p, targets, tags) if targets else p


def _inv_gen(p: Presentation, tag: str) -> NCPoly:
    g = gen_inv(tag)
    if g not in p.generators:
        raise MomentError(f"presentation lacks the inverse {tag!r}; build it with moment_presentation")
    return NCPoly.gen(g)


def edge_moment_alpha(q: Quiver, e, p: Presentation) -> MomentMatrix:
    """The actual tail moment map (M-bar)^-1, available at d = 1 only."""
    e = _edge(q, e)
    if e.is_loop:
        raise MomentError(f"edge {e.id!r} is a loop")
    if q.dim(e.src) != 1:
        raise MomentError("tail moment map requires matrix inverses for d > 1; unsupported")
    inv = _inv_gen(p, inverse_tag("gbar", e))
    return MomentMatrix(e.src, AlgMatrix((1,), (1,), {((1,), (1,)): inv}), f"alpha:{e.id}")


def edge_moment_loop(q: Quiver, e, p: Presentation) -> MomentMatrix:
    """Loop moment map d a^-1 d^-1 a at d = 1."""
    e = _edge(q, e)
    if not e.is_loop:
        raise MomentError(f"edge {e.id!r} is not a loop")
    if q.dim(e.src) != 1:
        raise MomentError("loop moment map requires matrix inverses; unsupported for d > 1")
    a = a_matrix(q, e)[(1,), (1,)]
    d = d_matrix(q, e)[(1,), (1,)]
    ai = _inv_gen(p, inverse_tag("a", e))
    di = _inv_gen(p, inverse_tag("d", e))
    return MomentMatrix(e.src, AlgMatrix((1,), (1,), {((1,), (1,)): d * ai * di * a}), f"loop:{e.id}")


def edge_moment(q: Quiver, e: Edge, v: str, p: Presentation) -> MomentMatrix:
    if e.is_loop:
        return edge_moment_loop(q, e, p)
    if v == e.tgt:
        return edge_moment_beta(q, e)
    return edge_moment_alpha(q, e, p)


def vertex_moment(q: Quiver, v: str, p: Presentation | None = None) -> MomentMatrix:
    """Ordered product of the incident edge maps (edge order)."""
    p = p or moment_presentation(q)
    M = AlgMatrix.identity((q.dim(v),))
    for e in q.edges:
        if v in (e.src, e.tgt):
            M = M @ edge_moment(q, e, v, p).entries
    return MomentMatrix(v, M, f"vertex:{v}")


def moment_ideal_generators(q: Quiver, ch: CharacterSpec, p: Presentation | None = None) -> list[NCPoly]:
    """mu_v(l^i_j) - xi_v delta^i_j for every vertex, vertices in quiver order."""
    p = p or moment_presentation(q)
    out = []
    for vx in q.vertices:
        M = vertex_moment(q, vx.id, p).entries
        xi = RatQ.coerce(ch.values.get(vx.id, 1))
        for i in range(1, vx.dim + 1):
            for j in range(1, vx.dim + 1):
                entry = M[(i,), (j,)]
                entry = entry if isinstance(entry, NCPoly) else NCPoly.const(entry)
                if i == j:
                    entry = entry - NCPoly.const(xi)
                out.append(entry)
    return out


# ---------------------------------------------------------------------------
# trace characters


class RhoPoly:
    """Polynomial in one commuting symbol rho with Laurent coefficients."""

    __slots__ = ("c",)

    def __init__(self, c: Mapping[int, LaurentQ] | None = None):
        self.c = {k: v for k, v in (c or {}).items() if not v.is_zero()}

    @classmethod
    def rho(cls) -> "RhoPoly":
        return cls({1: LaurentQ.const(1)})

    def __add__(self, o: "RhoPoly") -> "RhoPoly":
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out[k] + v if k in out else v
        return RhoPoly(out)

    def __sub__(self, o: "RhoPoly") -> "RhoPoly":
        return self + RhoPoly({k: -v for k, v in o.c.items()})

    def __mul__(self, o) -> "RhoPoly":
        if isinstance(o, LaurentQ):
            return RhoPoly({k: v * o for k, v in self.c.items()})
        out: dict = {}
        for k1, v1 in self.c.items():
            for k2, v2 in o.c.items():
                out[k1 + k2] = out[k1 + k2] + v1 * v2 if k1 + k2 in out else v1 * v2
        return RhoPoly(out)

    def is_zero(self) -> bool:
        return not self.c

    def __str__(self):
        if not self.c:
            return "0"
        return " + ".join(f"({v})*rho^{k}" for k, v in sorted(self.c.items()))


def character_check(N: int, rho=None) -> CheckReport:
    """Substitute l^i_j = rho delta^i_j into the reflection-equation relations.

    ``rho`` may be a number (a specific character) or None for a symbolic rho.
    """
    with timed() as t:
        R = build_r_matrix(N)
        Rn = R.nonzero()
        if rho is None:
            val = RhoPoly.rho()
        else:
            # a concrete character value: rho times the unit
            val = RhoPoly({0: LaurentQ.coerce(rho)})

        def l(i, j) -> RhoPoly:
            return val if i == j else RhoPoly()

        rng = range(1, N + 1)

        def Rv(i, j, k, m) -> LaurentQ:
            return Rn.get((i, j, k, m), LaurentQ())

        bad = None
        checked = 0
        for i in rng:
            for j in rng:
                for n in rng:
                    for p_ in rng:
                        lhs = RhoPoly()
                        rhs = RhoPoly()
                        # R^{ij}_{kl} l^l_m R^{mk}_{no} l^o_p
                        for (a, b, k, ll), c1 in Rn.items():
                            if (a, b) != (i, j):
                                continue
                            for m in rng:
                                x = l(ll, m)
                                if x.is_zero():
                                    continue
                                for o in rng:
                                    c2 = Rv(m, k, n, o)
                                    if c2.is_zero():
                                        continue
                                    lhs = lhs + x * l(o, p_) * (c1 * c2)
                        # l^i_l R^{lj}_{km} l^m_o R^{ok}_{np}
                        for ll in rng:
                            x = l(i, ll)
                            if x.is_zero():
                                continue
                            for k in rng:
                                for m in rng:
                                    c1 = Rv(ll, j, k, m)
                                    if c1.is_zero():
                                        continue
                                    for o in rng:
                                        c2 = Rv(o, k, n, p_)
                                        if c2.is_zero():
                                            continue
                                        rhs = rhs + x * l(m, o) * (c1 * c2)
                        diff = lhs - rhs
                        checked += 1
                        if not diff.is_zero() and bad is None:
                            bad = {"component": [i, j, n, p_], "value": str(diff)}
        params = {"N": N, "rho": "symbolic" if rho is None else str(rho)}
    rep = CheckReport("character", FAIL if bad else PASS, params, bad, {"components": checked})
    rep.elapsed_ms = t["ms"]
    return rep
