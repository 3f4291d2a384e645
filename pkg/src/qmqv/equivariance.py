"""Action of the vertex quantum groups U_q(gl_d) on words in the generators.

Each generator is a two-factor tensor.  ``a(e)^i_j`` lives in W_src^* (x) W_tgt
(index ``i`` on the dual factor), ``d(e)^k_l`` in W_tgt^* (x) W_src.  A word is
the tensor product of its letters' factors in reading order, and an L-matrix
entry acts through the iterated coproduct

    Delta(l^i_j) = sum_k l^i_k (x) l^k_j

on the factors sitting at its vertex; factors at other vertices see the counit
(``l^i_j -> delta^i_j``), and so does the empty word.
"""

from __future__ import annotations

from typing import Mapping

from .coeff import RatQ
from .freealg import GenId, Word, build_r_matrix, r_inverse
from .quiver import Quiver

ZERO = RatQ.coerce(0)
ONE = RatQ.coerce(1)

# rep[(i, j)] is a sparse matrix {(row, col): coefficient} for rho(l^i_j)
Rep = dict


def vector_rep(N: int, sign: str) -> Rep:
    """rho(l^{+i}_j) e_a = sum_b R^{ai}_{bj} e_b and rho(l^{-i}_j) e_a = sum_b (R^-1)^{ia}_{jb} e_b."""
    if sign == "+":
        R = build_r_matrix(N).nonzero()
        entry = lambda i, j, a, b: R.get((a, i, b, j))  # noqa: E731
    elif sign == "-":
        R = r_inverse(build_r_matrix(N)).nonzero()
        entry = lambda i, j, a, b: R.get((i, a, j, b))  # noqa: E731
    else:
        raise ValueError("sign must be '+' or '-'")
    rng = range(1, N + 1)
    out: Rep = {}
    for i in rng:
        for j in rng:
            m = {}
            for a in rng:
                for b in rng:
                    c = entry(i, j, a, b)
                    if c is not None and not c.is_zero():
                        m[(b, a)] = RatQ.coerce(c)
            out[(i, j)] = m
    return out


def _invert(M: list[list[RatQ]]) -> list[list[RatQ]]:
    n = len(M)
    A = [row[:] for row in M]
    B = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if p is None:
            raise ZeroDivisionError("singular block matrix")
        A[c], A[p], B[c], B[p] = A[p], A[c], B[p], B[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        B[c] = [x * inv for x in B[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
                B[r] = [x - f * y for x, y in zip(B[r], B[c])]
    return B


def dual_rep(rep: Rep, N: int) -> Rep:
    """rho*(l^i_j) = rho(S(l^i_j))^T with S(L) = L^-1 taken as a block matrix."""
    idx = [(i, x) for i in range(1, N + 1) for x in range(1, N + 1)]
    M = [[rep[(i, j)].get((x, y), ZERO) for (j, y) in idx] for (i, x) in idx]
    Inv = _invert(M)
    out: Rep = {(i, j): {} for i in range(1, N + 1) for j in range(1, N + 1)}
    for r, (i, x) in enumerate(idx):
        for c, (j, y) in enumerate(idx):
            if not Inv[r][c].is_zero():
                out[(i, j)][(y, x)] = Inv[r][c]
    return out


def specialize_rep(rep: Rep, q0) -> Rep:
    out: Rep = {}
    for k, m in rep.items():
        vals = {rc: RatQ.coerce(c.evaluate(q0)) for rc, c in m.items()}
        out[k] = {rc: c for rc, c in vals.items() if not c.is_zero()}
    return out


def letter_factors(q: Quiver, g: GenId) -> tuple[tuple[str, bool, int], tuple[str, bool, int]]:
    """((vertex, is_dual, index), ...) for the two tensor factors of a letter."""
    e = q.edge(g.edge)
    if g.rank == 0:
        return (e.src, True, g.upper), (e.tgt, False, g.lower)
    if g.rank == 1:
        return (e.tgt, True, g.upper), (e.src, False, g.lower)
    raise ValueError("adjoined inverses carry no tensor structure")


def act_on_word(q: Quiver, v: str, reps: Mapping[bool, Rep], i: int, j: int, w: Word) -> dict:
    """l^i_j (at vertex v) applied to the word w; reps maps is_dual -> Rep."""
    slots = []  # (letter position, factor number, index) for factors at v
    for pos, g in enumerate(w):
        for fi, (vx, dual, x) in enumerate(letter_factors(q, g)):
            if vx == v:
                slots.append((pos, fi, dual, x))
    if not slots:
        return {w: ONE} if i == j else {}
    N = q.dim(v)
    out: dict = {}
    # states: (current chain index, partially rewritten word) -> coefficient
    states = {(i, tuple(w)): ONE}
    for pos, fi, dual, x in slots:
        rep = reps[dual]
        nxt: dict = {}
        for (k, cur), c0 in states.items():
            for k2 in range(1, N + 1):
                for (y, col), c in rep[(k, k2)].items():
                    if col != x:
                        continue
                    g = cur[pos]
                    g2 = g._replace(upper=y) if fi == 0 else g._replace(lower=y)
                    key = (k2, cur[:pos] + (g2,) + cur[pos + 1:])
                    val = nxt.get(key, ZERO) + c0 * c
                    if val.is_zero():
                        nxt.pop(key, None)
                    else:
                        nxt[key] = val
        states = nxt
    for (k, cur), c in states.items():
        if k == j:
            val = out.get(cur, ZERO) + c
            if val.is_zero():
                out.pop(cur, None)
            else:
                out[cur] = val
    return out


def act(q: Quiver, v: str, reps: Mapping[bool, Rep], i: int, j: int, vec: Mapping[Word, RatQ]) -> dict:
    out: dict = {}
    for w, c in vec.items():
        for w2, c2 in act_on_word(q, v, reps, i, j, w).items():
            val = out.get(w2, ZERO) + c * c2
            if val.is_zero():
                out.pop(w2, None)
            else:
                out[w2] = val
    return out


def vertex_reps(N: int, sign: str, q0=None) -> dict[bool, Rep]:
    rep = vector_rep(N, sign)
    dual = dual_rep(rep, N)
    if q0 is not None:
        rep, dual = specialize_rep(rep, q0), specialize_rep(dual, q0)
    return {False: rep, True: dual}
