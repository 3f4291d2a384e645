"""Bounded-degree ideal computations: rewriting normal forms, degree spans,
ideal membership certificates, filtered dimensions and PBW certification.

Rewriting order
    Words are compared by length first and then lexicographically *from the
    right*, with the generator alphabet reversed.  For a pair of letters this
    makes every descent ``xy`` (``x > y`` in generator order) larger than
    ``yx``, so quadratic relations orient onto the nondecreasing (standard)
    monomials.  Plain deg-lex fails to do that for reflection-equation
    relations, whose deg-lex leading words can already be sorted.

Span bookkeeping
    Let ``S_D`` be the span of all ``x r y`` with ``|x| + deg r + |y| <= D``.
    Rewriting replaces a word ``w`` by ``NF(w)`` using only such multiples, so
    ``w - NF(w)`` lies in ``S_D`` and has leading word ``w``.  Hence
    ``S_D = span{w - NF(w) : w reducible} (+) span{NF(x r y)}`` and every rank
    question reduces to the *residues* ``NF(x r y)``, which vanish exactly when
    the rewriting system is confluent up to degree ``D``.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .coeff import LaurentQ, RatQ
from .freealg import GenId, NCPoly, Word, word_str
from .kernel import DEFAULT_PRIME, rank_mod_p
from .linalg import Echelon
from .relations import Presentation
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, timed

ONE = RatQ.coerce(1)

MAX_GENERATORS = 20
MAX_WORDS = 160_000


class GuardExceeded(RuntimeError):
    """The word space at the requested degree is larger than the guards allow."""


def max_words() -> int:
    env = os.environ.get("QMQV_MAX_WORDS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return MAX_WORDS


def word_count(n_gens: int, D: int) -> int:
    return sum(n_gens ** k for k in range(D + 1))


def check_guard(n_gens: int, D: int) -> None:
    if n_gens > MAX_GENERATORS:
        raise GuardExceeded(f"{n_gens} generators exceed the limit of {MAX_GENERATORS}")
    total = word_count(n_gens, D)
    limit = max_words()
    if total > limit:
        raise GuardExceeded(f"{total} words up to degree {D} exceed the limit of {limit}")


def words_of_length(gens: Sequence[GenId], k: int) -> Iterable[Word]:
    return product(gens, repeat=k)


def is_standard(w: Word) -> bool:
    return all(w[i] <= w[i + 1] for i in range(len(w) - 1))


def standard_count(n_gens: int, n: int) -> int:
    """Nondecreasing words of length <= n over n_gens letters: C(n + g, g)."""
    from math import comb

    return comb(n + n_gens, n_gens)


def _add_into(acc: dict, vec: dict, c: RatQ) -> None:
    for w, v in vec.items():
        x = v * c if not c.is_one() else v
        old = acc.get(w)
        if old is None:
            acc[w] = x
        else:
            s = old + x
            if s.is_zero():
                del acc[w]
            else:
                acc[w] = s


class RewriteSystem:
    """Rules ``lead -> tail`` from the interreduced relation span of a presentation."""

    def __init__(self, p: Presentation):
        self.presentation = p
        self.gens = sorted(p.generators)
        rk = {g: i for i, g in enumerate(self.gens)}
        self._rank = rk
        for r in p.relations:
            for w in r.terms:
                for g in w:
                    if g not in rk:
                        raise ValueError(f"relation uses undeclared generator {g}")
        self.key = lambda w: (len(w), tuple(-rk[g] for g in reversed(w)))
        ech = Echelon(self.key)
        for r in p.relations:
            ech.add(r.terms)
        # full interreduction: every tail is reduced against the other pivots
        rules: dict[Word, dict] = {}
        for lead in sorted(ech.pivots, key=self.key):
            row, inv = ech.pivots[lead]
            tail = {w: -(c * inv) for w, c in row.items() if w != lead}
            rules[lead] = tail
        self.rules = rules
        self._lead_lengths = sorted({len(w) for w in rules})
        self._interreduce()
        self._nf: dict[Word, dict] = {}

    def _interreduce(self) -> None:
        changed = True
        while changed:
            changed = False
            for lead in sorted(self.rules, key=self.key):
                tail = self.rules[lead]
                if any(w in self.rules for w in tail):
                    new = {}
                    for w, c in tail.items():
                        if w in self.rules:
                            _add_into(new, self.rules[w], c)
                        else:
                            _add_into(new, {w: ONE}, c)
                    self.rules[lead] = new
                    changed = True

    @property
    def leads(self) -> list[Word]:
        return sorted(self.rules, key=self.key)

    def match(self, w: Word) -> tuple[int, Word] | None:
        """Leftmost rule occurrence (shortest lead first at a position)."""
        rules = self.rules
        n = len(w)
        for i in range(n):
            for L in self._lead_lengths:
                if i + L > n:
                    break
                sub = w[i:i + L]
                if sub in rules:
                    return i, sub
        return None

    def nf_word(self, w: Word) -> dict:
        memo = self._nf
        hit = memo.get(w)
        if hit is not None:
            return hit
        stack = [w]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            m = self.match(u)
            if m is None:
                memo[u] = {u: ONE}
                stack.pop()
                continue
            i, lead = m
            pre, post = u[:i], u[i + len(lead):]
            subs = [(pre + t + post, c) for t, c in self.rules[lead].items()]
            missing = [s for s, _ in subs if s not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for s, c in subs:
                _add_into(acc, memo[s], c)
            memo[u] = acc
            stack.pop()
        return memo[w]

    def nf(self, vec: dict) -> dict:
        acc: dict = {}
        for w, c in vec.items():
            _add_into(acc, self.nf_word(w), c)
        return acc

    def normal_form(self, p: NCPoly) -> NCPoly:
        return NCPoly._raw(self.nf(p.terms))

    def irreducible(self, w: Word) -> bool:
        return self.match(w) is None


class DegreeSpan:
    """Exact description of ``S_D`` through a rewriting system plus residues."""

    def __init__(self, p: Presentation, D: int, rewrite: RewriteSystem | None = None):
        check_guard(len(p.generators), D)
        self.presentation = p
        self.D = D
        self.rs = rewrite or RewriteSystem(p)
        self._residues: Echelon | None = None
        self._residue_rank_by_degree: dict[int, int] = {}

    @property
    def key(self):
        return self.rs.key

    def multiples(self, max_degree: int | None = None):
        """Yield ``(degree, x, lead, y)`` for every rule multiple within the bound."""
        D = self.D if max_degree is None else max_degree
        gens = self.rs.gens
        for lead in self.rs.leads:
            L = len(lead)
            for extra in range(D - L + 1):
                for k in range(extra + 1):
                    for x in words_of_length(gens, k):
                        for y in words_of_length(gens, extra - k):
                            yield L + extra, x, lead, y

    def _residue(self, x: Word, lead: Word, y: Word) -> dict:
        rs = self.rs
        w = x + lead + y
        m = rs.match(w)
        if m == (len(x), lead):
            return {}
        row = {w: ONE}
        for t, c in rs.rules[lead].items():
            _add_into(row, {x + t + y: ONE}, -c)
        return rs.nf(row)

    def residues(self) -> Echelon:
        """Echelon basis of the residues, built degree by degree."""
        if self._residues is None:
            ech = Echelon(self.key)
            by_degree: dict[int, list] = {}
            for deg, x, lead, y in self.multiples():
                by_degree.setdefault(deg, []).append((x, lead, y))
            for n in range(self.D + 1):
                for x, lead, y in by_degree.get(n, []):
                    r = self._residue(x, lead, y)
                    if r:
                        ech.add(r)
                self._residue_rank_by_degree[n] = ech.rank
            self._residues = ech
        return self._residues

    def residue_rank(self, n: int | None = None) -> int:
        self.residues()
        n = self.D if n is None else n
        return self._residue_rank_by_degree.get(n, 0)

    def irreducible_count(self, n: int) -> int:
        gens = self.rs.gens
        return sum(1 for k in range(n + 1) for w in words_of_length(gens, k) if self.rs.irreducible(w))

    def rank(self, n: int | None = None) -> int:
        """Exact rank of S_n (n <= D)."""
        n = self.D if n is None else n
        total = word_count(len(self.rs.gens), n)
        return total - self.irreducible_count(n) + self.residue_rank(n)

    def reduce(self, p: NCPoly) -> dict:
        """Remainder of p modulo S_D (zero iff p lies in S_D)."""
        v = self.rs.nf(p.terms)
        if not v:
            return v
        return self.residues().reduce(v)

    def contains(self, p: NCPoly) -> bool:
        return not self.reduce(p)


def ideal_span(p: Presentation, D: int) -> DegreeSpan:
    if p.relations:
        D0 = max(r.degree for r in p.relations)
        if D < D0:
            raise ValueError(f"degree bound {D} is below the relation degree {D0}")
    return DegreeSpan(p, D)


def _poly_json(v: dict) -> str:
    return str(NCPoly._raw(dict(v)))


def ideal_membership(elem: NCPoly, p: Presentation, D: int, span: DegreeSpan | None = None) -> CheckReport:
    """Positive certificate that elem lies in the degree-D truncated ideal."""
    with timed() as t:
        params = {"degree": elem.degree if elem else 0, "bound": D}
        if elem.is_zero():
            status, details = PASS, {"certificate": "zero"}
        else:
            if elem.degree > D:
                raise ValueError("element degree exceeds the bound")
            try:
                span = span or DegreeSpan(p, D)
            except GuardExceeded as exc:
                status, details = INCONCLUSIVE, {"reason": str(exc)}
            else:
                nf = span.rs.nf(elem.terms)
                if not nf:
                    status, details = PASS, {"certificate": "rewrites to zero"}
                else:
                    rem = span.residues().reduce(nf)
                    if not rem:
                        status, details = PASS, {"certificate": "reduces against residues"}
                    else:
                        status, details = INCONCLUSIVE, {"normal_form": _poly_json(rem)}
    rep = CheckReport("ideal_membership", status, params, None, details)
    rep.elapsed_ms = t["ms"]
    return rep


def filtered_dimension(p: Presentation, n: int, span: DegreeSpan | None = None) -> int:
    """dim F_n / S_n = (words of length <= n) - rank(S_n)."""
    if span is None or span.D < n:
        span = DegreeSpan(p, n)
    return word_count(len(span.rs.gens), n) - span.rank(n)


def graded_dimensions(filtered: Sequence[int]) -> list[int]:
    return [filtered[0]] + [filtered[i] - filtered[i - 1] for i in range(1, len(filtered))]


def pbw_check(p: Presentation, D: int) -> CheckReport:
    """Standard monomials span (rewriting) and are independent (dimension count)."""
    with timed() as t:
        params = {"kind": p.algebra_kind, "bound": D, "generators": len(p.generators)}
        try:
            span = DegreeSpan(p, D)
        except GuardExceeded as exc:
            rep = CheckReport("pbw", INCONCLUSIVE, params, details={"reason": str(exc)})
            rep.elapsed_ms = t["ms"]
            return rep
        rs = span.rs
        g = len(rs.gens)
        bad_leads = [w for w in rs.leads if not (len(w) == 2 and w[0] > w[1])]
        nonstandard = None
        for k in range(D + 1):
            for w in words_of_length(rs.gens, k):
                if rs.irreducible(w) and not is_standard(w):
                    nonstandard = w
                    break
            if nonstandard is not None:
                break
        dims = [filtered_dimension(p, n, span) for n in range(D + 1)]
        expected = [standard_count(g, n) for n in range(D + 1)]
        spanning = nonstandard is None
        independent = dims == expected
        details = {
            "filtered_dimensions": dims,
            "standard_counts": expected,
            "graded_dimensions": graded_dimensions(dims),
            "rules": len(rs.rules),
            "non_quadratic_or_sorted_leads": [word_str(w) for w in bad_leads],
            "spanning": spanning,
            "independent": independent,
        }
        witness = None
        if not spanning:
            witness = {"irreducible_nonstandard_word": word_str(nonstandard)}
        elif not independent:
            n = next(i for i in range(D + 1) if dims[i] != expected[i])
            witness = {"degree": n, "filtered_dimension": dims[n], "standard_count": expected[n]}
        status = PASS if spanning and independent else FAIL
    rep = CheckReport("pbw", status, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep


# ---------------------------------------------------------------------------
# probabilistic cross-check of exact ranks


def _mod_inv(x: int, p: int) -> int:
    return pow(x % p, p - 2, p)


def _eval_mod(c: RatQ, q0: int, p: int) -> int:
    def lp(L) -> int:
        s = 0
        for k, v in L.items():
            s += v.numerator * _mod_inv(v.denominator, p) * pow(q0, k, p) if k >= 0 else \
                v.numerator * _mod_inv(v.denominator, p) * pow(_mod_inv(q0, p), -k, p)
        return s % p

    d = lp(c.den)
    if d == 0:
        raise ZeroDivisionError
    return lp(c.num) * _mod_inv(d, p) % p


def modular_rank(p: Presentation, D: int, q0: Fraction, prime: int = DEFAULT_PRIME) -> int:
    """Rank of the raw multiples x r y with q specialized to q0, modulo a prime."""
    check_guard(len(p.generators), D)
    gens = sorted(p.generators)
    qm = q0.numerator * _mod_inv(q0.denominator, prime) % prime
    index: dict[Word, int] = {}
    for k in range(D + 1):
        for w in words_of_length(gens, k):
            index[w] = len(index)
    rows = []
    for r in p.relations:
        coeffs = [(w, _eval_mod(c, qm, prime)) for w, c in r.terms.items()]
        d = r.degree
        for extra in range(D - d + 1):
            for k in range(extra + 1):
                for x in words_of_length(gens, k):
                    for y in words_of_length(gens, extra - k):
                        rows.append(([index[x + w + y] for w, _ in coeffs], [v for _, v in coeffs]))
    return rank_mod_p(rows, len(index), prime)


def rank_cross_check(p: Presentation, D: int, seed: int = 0, points: int = 3) -> CheckReport:
    """Compare the exact rank of S_D with ranks at random rational q0 (mod a prime)."""
    with timed() as t:
        span = DegreeSpan(p, D)
        exact = span.rank()
        rng = random.Random(seed)
        samples = []
        while len(samples) < points:
            q0 = Fraction(rng.randint(2, 10 ** 6), rng.randint(1, 10 ** 6))
            try:
                samples.append((str(q0), modular_rank(p, D, q0)))
            except ZeroDivisionError:
                continue
        agree = all(r == exact for _, r in samples)
        params = {"bound": D, "seed": seed, "points": points}
        details = {"exact_rank": exact, "sampled": samples}
        witness = None if agree else {"mismatches": [s for s in samples if s[1] != exact]}
    rep = CheckReport("rank_cross_check", PASS if agree else FAIL, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep


# ---------------------------------------------------------------------------
# identity suites

DEFAULT_SUITE_DEGREE = 4
FOURIER_DEGREE = 6


def _label(rc) -> str:
    r, c = rc
    return f"[{','.join(map(str, r))};{','.join(map(str, c))}]"


def _as_poly(v) -> NCPoly:
    return v if isinstance(v, NCPoly) else NCPoly.const(v)


def certify(name: str, items: Sequence[tuple[str, NCPoly]], span: DegreeSpan, params: dict,
            details: dict | None = None) -> CheckReport:
    """Membership of every labelled element in S_D.

    An element outside S_D is a failure only when the bound leaves two degrees
    of slack above the element; otherwise the verdict is inconclusive.
    """
    with timed() as t:
        D = span.D
        params = dict(params, bound=D)
        failed, unsure = [], []
        for label, x in items:
            if x.is_zero():
                continue
            if x.degree > D:
                unsure.append({"item": label, "reason": "degree exceeds bound"})
                continue
            rem = span.reduce(x)
            if rem:
                entry = {"item": label, "normal_form": _poly_json(rem)}
                (failed if D >= x.degree + 2 else unsure).append(entry)
        details = dict(details or {}, elements=len(items))
        if failed:
            status, witness = FAIL, failed[0]
            details["failing"] = len(failed)
        elif unsure:
            status, witness = INCONCLUSIVE, None
            details["uncertified"] = unsure
        else:
            status, witness = PASS, None
    rep = CheckReport(name, status, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep


def matrix_items(prefix: str, M) -> list[tuple[str, NCPoly]]:
    return [(f"{prefix}{_label(rc)}", _as_poly(v)) for rc, v in sorted(M.entries.items())]


def _refused(name: str, params: dict, reason: str) -> CheckReport:
    return CheckReport(name, INCONCLUSIVE, dict(params, bound=params.get("bound")),
                       details={"reason": f"unsupported: {reason}"})


def _span(p: Presentation, D: int, span: DegreeSpan | None) -> DegreeSpan:
    if span is not None and span.D >= D and span.presentation is p:
        return span
    return DegreeSpan(p, D)


def reflection_check(M, p: Presentation, D: int = DEFAULT_SUITE_DEGREE,
                     span: DegreeSpan | None = None, inverse: bool = False) -> CheckReport:
    """M2 R21 M1 R12 - R21 M1 R12 M2 in S_D, componentwise.

    With ``inverse=True`` the matrix is taken to satisfy the variant
    Mb2 R12^-1 Mb1 R21^-1 = R12^-1 Mb1 R21^-1 Mb2 obeyed by the inverse of a
    reflection-equation solution (the tail-side M-bar).
    """
    from .freealg import AlgMatrix
    from .relations import Leg, _rm, chain

    X = M if isinstance(M, AlgMatrix) else M.entries
    d = X.rows
    params = {"matrix": getattr(M, "label", ""), "dim": d, "inverse_form": inverse}
    if inverse:
        Ri, R21i = _rm(d, inv=True), _rm(d, inv=True, t21=True)
        E = chain(Leg(X, 2), Ri, Leg(X, 1), R21i) - chain(Ri, Leg(X, 1), R21i, Leg(X, 2))
    else:
        R, R21 = _rm(d), _rm(d, t21=True)
        E = chain(Leg(X, 2), R21, Leg(X, 1), R) - chain(R21, Leg(X, 1), R, Leg(X, 2))
    return certify("reflection", matrix_items("refl", E), _span(p, D, span), params)


def _edge_of(p: Presentation, e):
    from .quiver import Edge

    return e if isinstance(e, Edge) else p.quiver.edge(e)


def moment_condition_check(e, p: Presentation, D: int = DEFAULT_SUITE_DEGREE,
                           span: DegreeSpan | None = None) -> CheckReport:
    """Quantum moment map condition for M = I + (q - q^-1) D A on both generator matrices.

    A side: A2 R21 M1 R12 = M1 A2.  Derivative side: D2 M1 = R21 M1 R12 D2.
    For one-dimensional endpoints this is g a = q^2 a g and g d = q^-2 d g.
    """
    from .moment import edge_moment_beta
    from .relations import Leg, _rm, a_matrix, chain, d_matrix

    q = p.quiver
    e = _edge_of(p, e)
    params = {"edge": e.id, "dims": [q.dim(e.src), q.dim(e.tgt)]}
    if e.is_loop:
        return _loop_moment_check(q, e, params)
    M = edge_moment_beta(q, e).entries
    A, Dm = a_matrix(q, e), d_matrix(q, e)
    b = q.dim(e.tgt)
    R, R21 = _rm(b), _rm(b, t21=True)
    items = matrix_items("A", chain(Leg(A, 2), R21, Leg(M, 1), R) - chain(Leg(M, 1), Leg(A, 2)))
    items += matrix_items("D", chain(Leg(Dm, 2), Leg(M, 1)) - chain(R21, Leg(M, 1), R, Leg(Dm, 2)))
    if q.dim(e.src) == 1 and b == 1:
        g = _as_poly(M[(1,), (1,)])
        a, dd = _as_poly(A[(1,), (1,)]), _as_poly(Dm[(1,), (1,)])
        q2 = RatQ.coerce(LaurentQ.monomial(2))
        items += [("g a = q^2 a g", g * a - (a * g).scale(q2)),
                  ("g d = q^-2 d g", g * dd - (dd * g).scale(q2.inverse()))]
    return certify("moment_condition", items, _span(p, D, span), params)


def _loop_moment_check(q, e, params: dict) -> CheckReport:
    """At d = 1 the loop moment map d a^-1 d^-1 a is the constant q^2."""
    from .moment import edge_moment_loop, moment_presentation

    if q.dim(e.src) != 1:
        return _refused("moment_condition", dict(params, bound=FOURIER_DEGREE), "loop with d>1")
    Q1 = _edge_quiver(q, e)
    P = moment_presentation(Q1)
    mu = _as_poly(edge_moment_loop(Q1, Q1.edge(e.id), P).entries[(1,), (1,)])
    q2 = NCPoly.const(RatQ.coerce(LaurentQ.monomial(2)))
    return certify("moment_condition", [("mu = q^2", mu - q2)], DegreeSpan(P, FOURIER_DEGREE), params)


def manyrelns_check(e, p: Presentation, D: int = DEFAULT_SUITE_DEGREE,
                    span: DegreeSpan | None = None) -> CheckReport:
    """The seven matrix identities between g^alpha, g^beta, A and D on one edge.

    Here g^alpha = I + (q - q^-1) D A (acting at the head) and
    g^beta = I + (q - q^-1) A D (acting at the tail).
    """
    from .moment import edge_moment_alpha_bar, edge_moment_beta
    from .relations import Leg, _rm, a_matrix, chain, d_matrix

    q = p.quiver
    e = _edge_of(p, e)
    al, b = q.dim(e.src), q.dim(e.tgt)
    params = {"edge": e.id, "dims": [al, b]}
    if e.is_loop:
        return _refused("manyrelns", dict(params, bound=D), "loop edge")
    ga = edge_moment_beta(q, e).entries
    gb = edge_moment_alpha_bar(q, e).entries
    A, Dm = a_matrix(q, e), d_matrix(q, e)
    Rb, Rb21, Rbi, Rb21i = _rm(b), _rm(b, t21=True), _rm(b, inv=True), _rm(b, inv=True, t21=True)
    Ra, Ra21, Rai, Ra21i = _rm(al), _rm(al, t21=True), _rm(al, inv=True), _rm(al, inv=True, t21=True)
    ident = {
        1: ga @ Dm - Dm @ gb,
        2: gb @ A - A @ ga,
        3: chain(Leg(ga, 1), Rb, Leg(Dm, 2)) - chain(Rb21i, Leg(Dm, 2), Leg(ga, 1)),
        4: chain(Leg(gb, 1), Ra21i, Leg(A, 2)) - chain(Ra, Leg(A, 2), Leg(gb, 1)),
        5: chain(Leg(gb, 1), Leg(Dm, 2), Ra21) - chain(Leg(Dm, 2), Rai, Leg(gb, 1)),
        6: chain(Leg(ga, 1), Leg(A, 2), Rbi) - chain(Leg(A, 2), Rb21, Leg(ga, 1)),
        7: chain(Leg(gb, 1), Leg(ga, 2)) - chain(Leg(ga, 2), Leg(gb, 1)),
    }
    span = _span(p, D, span)
    per_item = {}
    items = []
    for k, X in ident.items():
        its = matrix_items(f"({k})", X)
        items += its
        per_item[str(k)] = certify(f"manyrelns({k})", its, span, params).status
    return certify("manyrelns", items, span, params, {"items": per_item})


# ---------------------------------------------------------------------------
# Fourier transforms at d = 1


def _edge_quiver(q, e):
    from .quiver import Quiver

    verts = {e.src: q.dim(e.src)}
    verts[e.tgt] = q.dim(e.tgt)
    return Quiver.build(verts, [(e.id, e.src, e.tgt)])


def fourier_data(q, e):
    """Localized single-edge presentation and the Fourier images of its generators.

    Non-loop: a -> d, d -> -a t where t inverts g = 1 + (q - q^-1) d a, and
    t -> q^-2 g (the image of g is q^2 t).  Loop: a -> d, d -> d a' d' with
    a', d' the inverses of a and d; a' -> d', d' -> d a d'.
    """
    from .freealg import gen_inv
    from .moment import edge_moment_beta
    from .relations import a_matrix, adjoin_inverses, d_matrix, full_presentation

    Q1 = _edge_quiver(q, e)
    e1 = Q1.edge(e.id)
    base = full_presentation(Q1, "Dq")
    a = _as_poly(a_matrix(Q1, e1)[(1,), (1,)])
    d = _as_poly(d_matrix(Q1, e1)[(1,), (1,)])
    ga, gd = next(iter(a.terms))[0], next(iter(d.terms))[0]
    if e.is_loop:
        P = adjoin_inverses(base, [a, d], [f"a:{e.id}", f"d:{e.id}"])
        ai = NCPoly.gen(gen_inv(f"a:{e.id}"))
        di = NCPoly.gen(gen_inv(f"d:{e.id}"))
        images = {ga: d, gd: d * ai * di,
                  gen_inv(f"a:{e.id}"): di, gen_inv(f"d:{e.id}"): d * a * di}
    else:
        g = _as_poly(edge_moment_beta(Q1, e1).entries[(1,), (1,)])
        P = adjoin_inverses(base, [g], [f"g:{e.id}"])
        tg = gen_inv(f"g:{e.id}")
        t = NCPoly.gen(tg)
        images = {ga: d, gd: -(a * t), tg: g.scale(RatQ.coerce(LaurentQ.monomial(-2)))}
    return P, base, images


def fourier_check(q, e, variant: str | None = None, D: int = FOURIER_DEGREE) -> CheckReport:
    """Images of all defining relations (and of the inverse relations) lie in S_D."""
    from .quiver import Edge

    e = e if isinstance(e, Edge) else q.edge(e)
    variant = variant or ("loop" if e.is_loop else "nonloop")
    params = {"edge": e.id, "variant": variant, "bound": D}
    if variant != ("loop" if e.is_loop else "nonloop"):
        raise ValueError(f"edge {e.id!r} does not match variant {variant!r}")
    if q.dim(e.src) != 1 or q.dim(e.tgt) != 1:
        return _refused("fourier", params, "requires d=1")
    P, base, images = fourier_data(q, e)
    span = DegreeSpan(P, D)
    items = [(f"relation {n}", r.substitute(images)) for n, r in enumerate(P.relations)]
    details = {}
    if variant == "nonloop":
        a_gen = next(g for g in base.generators if g.rank == 0)
        twice = NCPoly.gen(a_gen).substitute(images).substitute(images)
        nf = span.reduce(twice)
        details["double_image_of_a"] = _poly_json(nf)
        details["double_image_nonzero"] = bool(nf)
    return certify("fourier", items, span, params, details)


# ---------------------------------------------------------------------------
# equivariance


def relation_multiples(p: Presentation, D: int) -> Iterable[NCPoly]:
    """Every x r y with |x| + deg r + |y| <= D."""
    gens = sorted(p.generators)
    for r in p.relations:
        for extra in range(D - r.degree + 1):
            for k in range(extra + 1):
                for x in words_of_length(gens, k):
                    for y in words_of_length(gens, extra - k):
                        yield NCPoly._raw({x + w + y: c for w, c in r.terms.items()})


def _first_non_invariant(p: Presentation, span: DegreeSpan, q0) -> tuple[dict | None, int]:
    from .equivariance import act, vertex_reps

    q = p.quiver
    tested = 0
    for vx in q.vertices:
        for sign in ("+", "-"):
            reps = vertex_reps(vx.dim, sign, q0)
            for i in range(1, vx.dim + 1):
                for j in range(1, vx.dim + 1):
                    for elem in relation_multiples(p, span.D):
                        image = act(q, vx.id, reps, i, j, elem.terms)
                        tested += 1
                        if image and not span.contains(NCPoly._raw(image)):
                            return {"vertex": vx.id, "generator": f"l^{sign}{i}_{j}",
                                    "element": str(elem)}, tested
    return None, tested


def equivariance_check(p: Presentation, D: int = 2, q0=None) -> CheckReport:
    """Invariance of S_D under every l^{+-i}_j of every vertex quantum group.

    ``q0`` specializes q (e.g. 1 for the classical GL check).
    """
    with timed() as t:
        if D < 2:
            raise ValueError("equivariance needs D >= 2")
        params = {"bound": D, "kind": p.algebra_kind, "q0": None if q0 is None else str(q0)}
        witness, details, status = None, {}, PASS
        if p.inverses:
            status, details = INCONCLUSIVE, {"reason": "unsupported: localized presentations"}
        else:
            if q0 is not None:
                p = Presentation(p.quiver, p.algebra_kind, p.generators,
                                 [r.specialize(q0) for r in p.relations], [], p.families)
            try:
                span = DegreeSpan(p, D)
            except GuardExceeded as exc:
                status, details = INCONCLUSIVE, {"reason": str(exc)}
            else:
                witness, tested = _first_non_invariant(p, span, q0)
                details = {"actions_tested": tested}
                status = FAIL if witness else PASS
    rep = CheckReport("equivariance", status, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep
