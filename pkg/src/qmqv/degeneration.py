"""Classical (q = 1) and quasi-classical (q = e^h, t = h) limits.

At q = 1 the relations must collapse to commutators plus the Weyl relations
between a(e) and d(e) for non-loop edges (loop cross relations have no
constant term and become commutators).  At q = e^h the vertex moment map, minus the character
value xi_v = e^{h^2 L_v}, starts at order h^2 with coefficient

    2 * (sum_{e into v} D A  -  sum_{e out of v} A D)  -  L_v * I,

the factor 2 coming from t (q - q^-1) = 2 h^2 + O(h^4).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coeff import QDIFF, HbarSeries, LamPoly, RatQ, hbar_substitute
from .freealg import NCPoly, word_key, word_str
from .linalg import Echelon
from .quiver import Quiver
from .relations import Presentation, a_matrix, d_matrix
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, timed

# ---------------------------------------------------------------------------
# q = 1


def _commutator(x, y) -> dict:
    return {(x, y): RatQ.coerce(1), (y, x): RatQ.coerce(-1)}


def _weyl(d, a) -> dict:
    """d a - a d - delta^{d.upper}_{a.lower} delta^{a.upper}_{d.lower}."""
    out = _commutator(d, a)
    if d.upper == a.lower and a.upper == d.lower:
        out[()] = RatQ.coerce(-1)
    return out


def classical_relations(p: Presentation, label: str) -> list[dict]:
    """Expected q = 1 span for one relation family of p."""
    kind, _, rest = label.partition(":")
    gens = [g for g in p.generators if g.rank < 2]
    if kind in ("aa", "dd"):
        rank = 0 if kind == "aa" else 1
        gs = [g for g in gens if g.edge == rest and g.rank == rank]
        return [_commutator(x, y) for i, x in enumerate(gs) for y in gs[i + 1:]]
    if kind == "ad":
        ds = [g for g in gens if g.edge == rest and g.rank == 1]
        as_ = [g for g in gens if g.edge == rest and g.rank == 0]
        # a loop's cross relations carry no constant term: plain commutators at q = 1
        loop = p.quiver.edge(rest).is_loop
        return [(_commutator(d, a) if loop else _weyl(d, a)) for d in ds for a in as_]
    if kind == "cross":
        e, f = rest.split(",")
        ge = [g for g in gens if g.edge == e]
        gf = [g for g in gens if g.edge == f]
        return [_commutator(x, y) for x in ge for y in gf]
    raise ValueError(f"no classical form for family {label!r}")


def _same_span(xs: list[dict], ys: list[dict]) -> tuple[bool, dict | None]:
    ex, ey = Echelon(word_key), Echelon(word_key)
    for v in xs:
        ex.add(v)
    for v in ys:
        ey.add(v)
    for v in ys:
        if not ex.contains(v):
            return False, {"expected_not_generated": str(NCPoly._raw(v))}
    for v in xs:
        if not ey.contains(v):
            return False, {"generated_not_expected": str(NCPoly._raw(v))}
    return True, None


def classical_limit_check(p: Presentation) -> CheckReport:
    """Every relation family at q = 1 spans exactly its classical counterpart."""
    with timed() as t:
        params = {"kind": p.algebra_kind, "families": len(p.families)}
        witness, per_family, skipped = None, {}, []
        start = 0
        for label, n in p.families:
            rels = p.relations[start:start + n]
            start += n
            if label.startswith("inv:"):
                skipped.append(label)
                continue
            try:
                spec = [r.specialize(1).terms for r in rels]
            except ZeroDivisionError:
                witness = {"family": label, "reason": "pole at q=1"}
                break
            ok, wit = _same_span(spec, classical_relations(p, label))
            per_family[label] = ok
            if not ok:
                witness = dict(wit, family=label)
                break
        details = {"families": per_family}
        if skipped:
            details["skipped"] = skipped
    rep = CheckReport("classical_limit", FAIL if witness else PASS, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep


# ---------------------------------------------------------------------------
# q = e^h: polynomials with h-series coefficients

SPoly = dict  # Word -> HbarSeries


def _s_add(x: SPoly, y: SPoly) -> SPoly:
    out = dict(x)
    for w, c in y.items():
        out[w] = out[w] + c if w in out else c
    return {w: c for w, c in out.items() if not c.is_zero()}


def _s_mul(x: SPoly, y: SPoly) -> SPoly:
    out: SPoly = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            w = w1 + w2
            c = c1 * c2
            out[w] = out[w] + c if w in out else c
    return {w: c for w, c in out.items() if not c.is_zero()}


def _s_scale(x: SPoly, s: HbarSeries) -> SPoly:
    out = {w: c * s for w, c in x.items()}
    return {w: c for w, c in out.items() if not c.is_zero()}


def _lift(p: NCPoly, order: int) -> SPoly:
    return {w: hbar_substitute(c, order) for w, c in p.terms.items()}


SMatrix = dict  # (i, j) -> SPoly


def _m_identity(n: int, order: int) -> SMatrix:
    return {(i, i): {(): HbarSeries.const(1, order)} for i in range(1, n + 1)}


def _m_add(X: SMatrix, Y: SMatrix) -> SMatrix:
    out = dict(X)
    for k, v in Y.items():
        out[k] = _s_add(out[k], v) if k in out else v
    return {k: v for k, v in out.items() if v}


def _m_mul(X: SMatrix, Y: SMatrix, n: int) -> SMatrix:
    out: SMatrix = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            acc: SPoly = {}
            for k in range(1, n + 1):
                if (i, k) in X and (k, j) in Y:
                    acc = _s_add(acc, _s_mul(X[(i, k)], Y[(k, j)]))
            if acc:
                out[(i, j)] = acc
    return out


def _m_scale(X: SMatrix, s: HbarSeries) -> SMatrix:
    out = {k: _s_scale(v, s) for k, v in X.items()}
    return {k: v for k, v in out.items() if v}


def _alg_product(X, Y, order: int) -> SMatrix:
    P = X @ Y
    return {(r[0], c[0]): _lift(v if isinstance(v, NCPoly) else NCPoly.const(v), order)
            for (r, c), v in P.entries.items()}


def _t_series(t, order: int) -> HbarSeries:
    if t is None or t == "hbar":
        return HbarSeries.hbar(order)
    return HbarSeries.const(Fraction(t), order)


def _exp_h2(lam: LamPoly, order: int) -> HbarSeries:
    cs = [LamPoly() for _ in range(order + 1)]
    k, term, fact = 0, LamPoly.const(1), 1
    while 2 * k <= order:
        cs[2 * k] = term * Fraction(1, fact)
        k += 1
        fact *= k
        term = term * lam
    return HbarSeries(cs, order)


def lambda_symbol(v: str) -> str:
    return f"L_{v}"


def _lam(lambdas: Mapping[str, object] | None, v: str) -> LamPoly:
    val = (lambdas or {}).get(v, lambda_symbol(v))
    if isinstance(val, LamPoly):
        return val
    if isinstance(val, str):
        return LamPoly.symbol(val)
    return LamPoly.const(Fraction(val))


def hbar_vertex_moment(q: Quiver, v: str, order: int = 2, t=None) -> SMatrix:
    """mu_v at q = e^h as a d_v x d_v matrix of h-series polynomials (loop-free v)."""
    n = q.dim(v)
    s = _t_series(t, order) * hbar_substitute(QDIFF, order)
    M = _m_identity(n, order)
    for e in q.edges:
        if e.is_loop and e.src == v:
            raise ValueError(f"vertex {v!r} carries the loop {e.id!r}")
        if e.tgt == v:
            X = _m_scale(_alg_product(d_matrix(q, e), a_matrix(q, e), order), s)
            E = _m_add(_m_identity(n, order), X)
        elif e.src == v:
            # (I + s A D)^-1 as a Neumann series; s has positive valuation
            X = _m_scale(_alg_product(a_matrix(q, e), d_matrix(q, e), order), -s)
            E, term = _m_identity(n, order), _m_identity(n, order)
            for _ in range(order):
                term = _m_mul(term, X, n)
                if not term:
                    break
                E = _m_add(E, term)
        else:
            continue
        M = _m_mul(M, E, n)
    return M


@dataclass
class ClassicalMomentExpr:
    vertex: str
    entries: dict  # (i, j) -> {word: Fraction}

    def entry_str(self, i: int, j: int) -> str:
        terms = self.entries.get((i, j), {})
        return str(NCPoly._raw({w: RatQ.coerce(c) for w, c in terms.items()})) if terms else "0"


def classical_moment(q: Quiver, v: str) -> ClassicalMomentExpr:
    """sum_{e into v} D A - sum_{e out of v} A D, as ordered words."""
    n = q.dim(v)
    out: dict = {}
    for e in q.edges:
        if e.is_loop:
            continue
        if e.tgt == v:
            P, sign = d_matrix(q, e) @ a_matrix(q, e), 1
        elif e.src == v:
            P, sign = a_matrix(q, e) @ d_matrix(q, e), -1
        else:
            continue
        for (r, c), val in P.entries.items():
            acc = out.setdefault((r[0], c[0]), {})
            for w, coef in val.terms.items():
                x = acc.get(w, Fraction(0)) + sign * coef.evaluate(1)
                if x:
                    acc[w] = x
                else:
                    acc.pop(w, None)
    return ClassicalMomentExpr(v, {k: d for k, d in out.items() if d and k[0] <= n})


def _coeff_table(X: SMatrix, k: int) -> dict:
    """(i, j) -> {word: LamPoly} for the h^k coefficient."""
    out = {}
    for ij, poly in X.items():
        row = {w: c.coefficient(k) for w, c in poly.items() if not c.coefficient(k).is_zero()}
        if row:
            out[ij] = row
    return out


def _table_str(row: dict) -> str:
    if not row:
        return "0"
    parts = []
    for w in sorted(row, key=word_key):
        parts.append(f"({row[w]})*{word_str(w)}" if w else f"({row[w]})")
    return " + ".join(parts)


def hbar_moment_check(q: Quiver, lambdas: Mapping[str, object] | None = None, order: int = 2,
                      t=None) -> CheckReport:
    """h-adic expansion of mu_v - xi_v I against 2 * (classical - L_v / 2 * I)."""
    with timed() as tm:
        params = {"order": order, "t": "hbar" if t is None else str(t), "bound": order}
        if order < 2:
            raise ValueError("order must be at least 2")
        loops = [e.id for e in q.edges if e.is_loop]
        if loops:
            rep = CheckReport("hbar_moment", INCONCLUSIVE, params,
                              details={"reason": f"unsupported: loop edges {loops}"})
            rep.elapsed_ms = tm["ms"]
            return rep
        two = LamPoly.const(2)
        witness = None
        per_vertex = {}
        for vx in q.vertices:
            v, n = vx.id, vx.dim
            lam = _lam(lambdas, v)
            xi = _exp_h2(lam, order)
            M = hbar_vertex_moment(q, v, order, t)
            G = _m_add(M, {(i, i): {(): -xi} for i in range(1, n + 1)})
            low = [_coeff_table(G, k) for k in (0, 1)]
            h2 = _coeff_table(G, 2)
            if t is None or t == "hbar":
                cl = classical_moment(q, v)
                expected = {}
                for ij, terms in cl.entries.items():
                    expected[ij] = {w: two * LamPoly.const(c) for w, c in terms.items()}
                for i in range(1, n + 1):
                    row = expected.setdefault((i, i), {})
                    row[()] = row.get((), LamPoly()) - lam
                expected = {ij: {w: c for w, c in row.items() if not c.is_zero()}
                            for ij, row in expected.items()}
                expected = {ij: row for ij, row in expected.items() if row}
            else:
                cl = None
                expected = None
            entries = {}
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    entries[f"{i},{j}"] = {
                        "h2": _table_str(h2.get((i, j), {})),
                        "classical": cl.entry_str(i, j) if cl else None,
                    }
            per_vertex[v] = entries
            if witness is None:
                for k, tab in enumerate(low):
                    if tab:
                        ij = min(tab)
                        witness = {"vertex": v, "order": k, "entry": list(ij), "coefficient": _table_str(tab[ij])}
                        break
            if witness is None and expected is not None and h2 != expected:
                ij = min(set(h2) ^ set(expected) or {k for k in h2 if h2[k] != expected.get(k)})
                witness = {"vertex": v, "order": 2, "entry": list(ij),
                           "coefficient": _table_str(h2.get(ij, {})),
                           "expected": _table_str(expected.get(ij, {}))}
        details = {"vertices": per_vertex, "normalization": "2*(classical - L/2)"}
    rep = CheckReport("hbar_moment", FAIL if witness else PASS, params, witness, details)
    rep.elapsed_ms = tm["ms"]
    return rep
