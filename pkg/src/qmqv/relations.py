"""Defining relations of the quantized coordinate algebra O_q and the
differential-operator algebra D_q attached to a quiver with dimension vector.

Every relation family is a matrix identity ``LHS - RHS = 0`` between operators
on two tensor legs; the scalar components are expanded immediately and a
maximal independent subset (in row-major component order) is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .freealg import (
    AlgMatrix,
    GenId,
    NCPoly,
    build_r_matrix,
    flip,
    gen_a,
    gen_d,
    gen_inv,
    place_on_legs,
    r_21,
    r_inverse,
    word_key,
)
from .linalg import independent_subset
from .quiver import Edge, Quiver


class RelationError(ValueError):
    """Unsupported incidence or localization request."""


# ---------------------------------------------------------------------------
# leg-placement chains


@dataclass(frozen=True)
class Leg:
    """A one-leg operator waiting to be placed on ``leg`` of a two-leg space."""

    X: AlgMatrix
    leg: int


def _touches(f, p: int) -> bool:
    return isinstance(f, AlgMatrix) or f.leg == p


def _col_dim(f, p: int) -> int:
    if isinstance(f, AlgMatrix):
        return f.col_shape[p - 1]
    return f.X.col_shape[0]


def chain(*factors, legs: int = 2) -> AlgMatrix:
    """Product of factors (leftmost applied last) with identity legs inferred.

    Each factor is either a full ``legs``-leg AlgMatrix or a ``Leg``.  The
    input dimension of each leg is read off the rightmost factor touching it.
    """
    in_shape = []
    for p in range(1, legs + 1):
        for f in reversed(factors):
            if _touches(f, p):
                in_shape.append(_col_dim(f, p))
                break
        else:
            raise RelationError(f"leg {p} is never acted on")
    cur = list(in_shape)
    result = None
    for f in reversed(factors):
        if isinstance(f, Leg):
            shape = [None if p + 1 == f.leg else cur[p] for p in range(legs)]
            M = place_on_legs(f.X, (f.leg,), shape)
        else:
            M = f
        if tuple(cur) != M.col_shape:
            raise RelationError(f"shape mismatch: {M.shape_str()} applied to {cur}")
        result = M if result is None else M @ result
        cur = list(M.row_shape)
    return result


def _rm(d: int, *, inv: bool = False, t21: bool = False) -> AlgMatrix:
    R = build_r_matrix(d)
    if inv:
        R = r_inverse(R)
    if t21:
        R = r_21(R)
    return AlgMatrix.from_rmatrix(R)


# ---------------------------------------------------------------------------
# generators


def a_gens(q: Quiver, e: Edge) -> list[GenId]:
    pos = q.edge_index(e.id)
    return [gen_a(e.id, pos, i, j) for i in range(1, q.dim(e.src) + 1) for j in range(1, q.dim(e.tgt) + 1)]


def d_gens(q: Quiver, e: Edge) -> list[GenId]:
    pos = q.edge_index(e.id)
    return [gen_d(e.id, pos, k, l) for k in range(1, q.dim(e.tgt) + 1) for l in range(1, q.dim(e.src) + 1)]


def a_matrix(q: Quiver, e: Edge) -> AlgMatrix:
    """A[i, j] = a(e)^i_j, rows indexed by the source vertex."""
    pos = q.edge_index(e.id)
    return AlgMatrix.from_function(q.dim(e.src), q.dim(e.tgt), lambda i, j: NCPoly.gen(gen_a(e.id, pos, i, j)))


def d_matrix(q: Quiver, e: Edge) -> AlgMatrix:
    """D[k, l] = d(e)^k_l, rows indexed by the target vertex (the adjoint edge's source)."""
    pos = q.edge_index(e.id)
    return AlgMatrix.from_function(q.dim(e.tgt), q.dim(e.src), lambda k, l: NCPoly.gen(gen_d(e.id, pos, k, l)))


def _gen_matrix(q: Quiver, e: Edge, kind: str) -> tuple[AlgMatrix, str, str]:
    """Matrix for a(e) or d(e) together with the (src, tgt) incidence it carries."""
    if kind == "a":
        return a_matrix(q, e), e.src, e.tgt
    return d_matrix(q, e), e.tgt, e.src


def _independent(polys: Sequence[NCPoly]) -> list[NCPoly]:
    keep = independent_subset((p.terms for p in polys), key=word_key)
    return [polys[i] for i in keep]


def _components(M: AlgMatrix) -> list[NCPoly]:
    return [NCPoly._raw(dict(v.terms)) if isinstance(v, NCPoly) else NCPoly.const(v) for v in M.components()]


# ---------------------------------------------------------------------------
# same-edge relations


def _same_edge_matrix(q: Quiver, X: AlgMatrix, src: str, tgt: str) -> AlgMatrix:
    if src != tgt:
        Rv = _rm(q.dim(src))
        R21w = _rm(q.dim(tgt), t21=True)
        return chain(Rv, Leg(X, 2), Leg(X, 1)) - chain(Leg(X, 1), Leg(X, 2), R21w)
    n = q.dim(src)
    R, R21 = _rm(n), _rm(n, t21=True)
    return chain(R21, Leg(X, 1), R, Leg(X, 2)) - chain(Leg(X, 2), R21, Leg(X, 1), R)


def oq_edge_relations(q: Quiver, e: Edge | str) -> list[NCPoly]:
    """Relations among the a(e) generators (FRT type, or reflection equation for loops)."""
    e = q.edge(e) if isinstance(e, str) else e
    return _independent(_components(_same_edge_matrix(q, a_matrix(q, e), e.src, e.tgt)))


def dd_edge_relations(q: Quiver, e: Edge | str) -> list[NCPoly]:
    """Relations among the d(e) generators: those of a(e^v)."""
    e = q.edge(e) if isinstance(e, str) else e
    return _independent(_components(_same_edge_matrix(q, d_matrix(q, e), e.tgt, e.src)))


def cross_matrix_same_edge(q: Quiver, e: Edge) -> AlgMatrix:
    A, D = a_matrix(q, e), d_matrix(q, e)
    if e.is_loop:
        n = q.dim(e.src)
        R, R21, R21i = _rm(n), _rm(n, t21=True), _rm(n, inv=True, t21=True)
        return chain(R21, Leg(D, 1), R, Leg(A, 2)) - chain(Leg(A, 2), R21, Leg(D, 1), R21i)
    Rvi = _rm(q.dim(e.src), inv=True)
    Rw = _rm(q.dim(e.tgt))
    lhs = chain(Leg(D, 2), Rvi, Leg(A, 1))
    rhs = chain(Leg(A, 1), Rw, Leg(D, 2))
    Om = flip(q.dim(e.tgt), q.dim(e.src))
    if Om.row_shape != lhs.row_shape or Om.col_shape != lhs.col_shape:
        raise RelationError("Omega shape mismatch")
    return lhs - rhs - Om


def dq_edge_relations(q: Quiver, e: Edge | str) -> list[NCPoly]:
    """a-a, d-d and same-edge cross relations of the edge algebra D_q(e)."""
    e = q.edge(e) if isinstance(e, str) else e
    return oq_edge_relations(q, e) + dd_edge_relations(q, e) + same_edge_cross_relations(q, e)


def same_edge_cross_relations(q: Quiver, e: Edge | str) -> list[NCPoly]:
    e = q.edge(e) if isinstance(e, str) else e
    return _independent(_components(cross_matrix_same_edge(q, e)))


# ---------------------------------------------------------------------------
# distinct-edge relations


def classify_incidence(se: str, te: str, sf: str, tf: str) -> tuple[str, dict]:
    """Table row for generators on edges e < f with the given endpoints."""
    e_loop, f_loop = se == te, sf == tf
    if e_loop and f_loop:
        return ("loop_loop", {"v": se}) if se == sf else ("disjoint", {})
    if f_loop:
        v = sf
        if te == v:
            return "into_loop", {"v": v}
        if se == v:
            return "out_loop", {"v": v}
        return "disjoint", {}
    if e_loop:
        v = se
        if tf == v:
            return "loop_into", {"v": v}
        if sf == v:
            return "loop_out", {"v": v}
        return "disjoint", {}
    if se == sf and te == tf:
        return "parallel", {"v": se, "w": te}
    if se == tf and te == sf:
        return "antiparallel", {"v": se, "w": te}
    if te == sf:
        return "chain_in_out", {"v": te}
    if se == tf:
        return "chain_out_in", {"v": se}
    if te == tf:
        return "both_in", {"v": te}
    if se == sf:
        return "both_out", {"v": se}
    return "disjoint", {}


def _table_matrix(q: Quiver, row: str, vs: dict, Ae: AlgMatrix, Af: AlgMatrix) -> AlgMatrix:
    Ae2, Af1 = Leg(Ae, 2), Leg(Af, 1)
    if row == "disjoint":
        return chain(Af1, Ae2) - chain(Ae2, Af1)
    v = q.dim(vs["v"])
    Rv, Rvi = _rm(v), _rm(v, inv=True)
    if row == "parallel":
        return chain(Af1, Ae2) - chain(Rv, Ae2, Af1, _rm(q.dim(vs["w"])))
    if row == "antiparallel":
        return chain(Af1, Rv, Ae2) - chain(Ae2, _rm(q.dim(vs["w"]), inv=True), Af1)
    if row == "chain_in_out":
        return chain(Af1, Ae2) - chain(Ae2, Rvi, Af1)
    if row == "chain_out_in":
        return chain(Af1, Rv, Ae2) - chain(Ae2, Af1)
    if row == "both_in":
        return chain(Af1, Ae2) - chain(Ae2, Af1, Rv)
    if row == "both_out":
        return chain(Af1, Ae2) - chain(Rv, Ae2, Af1)
    if row == "into_loop":
        return chain(Af1, Ae2) - chain(Ae2, Rvi, Af1, Rv)
    if row == "out_loop":
        return chain(Af1, Rv, Ae2) - chain(Rv, Ae2, Af1)
    if row == "loop_into":
        return chain(Af1, Rv, Ae2) - chain(Ae2, Af1, Rv)
    if row == "loop_out":
        return chain(Af1, Ae2) - chain(Rv, Ae2, Rvi, Af1)
    if row == "loop_loop":
        return chain(Af1, Rv, Ae2, Rvi) - chain(Rv, Ae2, Rvi, Af1)
    raise RelationError(f"unsupported incidence {row!r}")


def cross_edge_relations(q: Quiver, e: Edge | str, f: Edge | str, kinds: Sequence[str] = ("a",)) -> list[NCPoly]:
    """Relations between generators on distinct edges e < f.

    ``kinds`` lists which generator kinds take part ("a", "d"); for D_q all
    four pairings are produced, a d(e) generator carrying the incidence of e^v.
    """
    e = q.edge(e) if isinstance(e, str) else e
    f = q.edge(f) if isinstance(f, str) else f
    ie, jf = q.edge_index(e.id), q.edge_index(f.id)
    if ie == jf:
        raise RelationError("cross relations need two distinct edges")
    if ie > jf:
        raise RelationError(f"edges must be given in edge order ({e.id!r} comes after {f.id!r})")
    out: list[NCPoly] = []
    for ke in kinds:
        for kf in kinds:
            Me, se, te = _gen_matrix(q, e, ke)
            Mf, sf, tf = _gen_matrix(q, f, kf)
            row, vs = classify_incidence(se, te, sf, tf)
            out.extend(_independent(_components(_table_matrix(q, row, vs, Me, Mf))))
    return out


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    quiver: Quiver
    algebra_kind: str
    generators: list
    relations: list
    inverses: list = field(default_factory=list)
    families: list = field(default_factory=list)  # (label, count) in relation order

    def gen_count(self) -> int:
        return len(self.generators)

    def family_counts(self) -> dict:
        return {label: n for label, n in self.families}


def full_presentation(q: Quiver, kind: str = "Dq") -> Presentation:
    if kind not in ("Oq", "Dq"):
        raise ValueError("kind must be 'Oq' or 'Dq'")
    gens: list[GenId] = []
    rels: list[NCPoly] = []
    fams: list = []

    def push(label, polys):
        rels.extend(polys)
        fams.append((label, len(polys)))

    for e in q.edges:
        gens.extend(a_gens(q, e))
        if kind == "Dq":
            gens.extend(d_gens(q, e))
    for e in q.edges:
        push(f"aa:{e.id}", oq_edge_relations(q, e))
        if kind == "Dq":
            push(f"dd:{e.id}", dd_edge_relations(q, e))
            push(f"ad:{e.id}", same_edge_cross_relations(q, e))
    kinds = ("a", "d") if kind == "Dq" else ("a",)
    for i, e in enumerate(q.edges):
        for f in q.edges[i + 1:]:
            push(f"cross:{e.id},{f.id}", cross_edge_relations(q, e, f, kinds))
    return Presentation(q, kind, sorted(gens), rels, [], fams)


def adjoin_inverses(p: Presentation, targets: Sequence[NCPoly], tags: Sequence[str] | None = None) -> Presentation:
    """Adjoin a two-sided inverse for each 1x1 target element (degree <= 2)."""
    gens = list(p.generators)
    rels = list(p.relations)
    invs = list(p.inverses)
    fams = list(p.families)
    for n, t in enumerate(targets):
        if t.degree > 2:
            raise RelationError("only elements of degree <= 2 can be inverted")
        if t.is_zero():
            raise RelationError("cannot invert zero")
        tag = tags[n] if tags else f"g{len(invs)}"
        g = gen_inv(tag)
        if g in gens:
            raise RelationError(f"duplicate inverse tag {tag!r}")
        gens.append(g)
        G = NCPoly.gen(g)
        one = NCPoly.const(1)
        rels.extend([t * G - one, G * t - one])
        fams.append((f"inv:{tag}", 2))
        invs.append((t, g))
    return Presentation(p.quiver, p.algebra_kind, sorted(gens), rels, invs, fams)
