"""Words, noncommutative polynomials, the R-matrix and tensor-leg calculus.

Conventions
-----------
An operator X on a tensor product of vertex spaces is stored as an
``AlgMatrix`` whose rows and columns are multi-indices (one 1-based index per
tensor leg, leg 1 leftmost).  ``X[(r1, r2), (c1, c2)]`` is the coefficient of
the output basis vector r for input basis vector c, so composition is the
ordinary matrix product and ``X @ Y`` means "apply Y first".

The R-matrix entry R^{ij}_{kl} sits at row (i, j), column (k, l).  A generator
matrix A for an edge v -> w has A[(i,), (j,)] = a^i_j, with i indexing the
source vertex and j the target.  These choices are pinned by the one-edge
fixtures: with d = (1, 1) the cross relation reads d q^-1 a = a q d + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, NamedTuple, Sequence

from .coeff import ONE, Q, QDIFF, QINV, ZERO, LaurentQ, RatQ
from .report import FAIL, PASS, CheckReport, timed

KIND_RANK = {"a": 0, "d": 1, "inv": 2}
KIND_NAME = {0: "a", 1: "d", 2: "inv"}


class GenId(NamedTuple):
    """A generator; tuple order is the generator order used for standard monomials.

    ``rank`` is 0 for a(e), 1 for d(e) (the derivative generators) and 2 for
    adjoined inverses; ``pos`` is the edge position in the quiver's edge order.
    Inverse generators carry their ``tag`` and compare by it.
    """

    rank: int
    pos: int
    upper: int
    lower: int
    edge: str
    tag: str = ""

    @property
    def kind(self) -> str:
        return KIND_NAME[self.rank]

    def __str__(self):
        if self.rank == 2:
            return f"inv[{self.tag}]"
        return f"{self.kind}[{self.edge}]^{self.upper}_{self.lower}"

    def to_json(self) -> dict:
        if self.rank == 2:
            return {"edge": self.edge, "kind": "inv", "tag": self.tag}
        return {"edge": self.edge, "kind": self.kind, "up": self.upper, "lo": self.lower}


def gen_a(edge: str, pos: int, i: int, j: int) -> GenId:
    return GenId(0, pos, i, j, edge)


def gen_d(edge: str, pos: int, i: int, j: int) -> GenId:
    return GenId(1, pos, i, j, edge)


def gen_inv(tag: str, edge: str = "") -> GenId:
    return GenId(2, 0, 0, 0, edge, tag)


Word = tuple  # tuple[GenId, ...]


def word_key(w: Word):
    return (len(w), w)


def word_compare(u: Word, v: Word) -> int:
    """Degree-lexicographic comparison: -1, 0 or 1."""
    ku, kv = word_key(u), word_key(v)
    return (ku > kv) - (ku < kv)


def word_str(w: Word) -> str:
    return ".".join(str(g) for g in w) if w else "1"


# ---------------------------------------------------------------------------


def _coerce_coeff(c) -> RatQ:
    if isinstance(c, RatQ):
        return c
    return RatQ.coerce(c)


class NCPoly:
    """Finite sum of words with RatQ coefficients (immutable by convention)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        t = {}
        if terms:
            for w, c in terms.items():
                c = _coerce_coeff(c)
                if not c.is_zero():
                    t[tuple(w)] = c
        self.terms: dict[Word, RatQ] = t

    @classmethod
    def _raw(cls, t: dict) -> "NCPoly":
        obj = cls.__new__(cls)
        obj.terms = t
        return obj

    @classmethod
    def gen(cls, g: GenId, c=1) -> "NCPoly":
        return cls({(g,): c})

    @classmethod
    def const(cls, c) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def word(cls, w: Sequence[GenId], c=1) -> "NCPoly":
        return cls({tuple(w): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "NCPoly":
        return NCPoly._raw({w: c for w, c in self.terms.items() if len(w) == k})

    def leading(self) -> tuple[Word, RatQ]:
        w = max(self.terms, key=word_key)
        return w, self.terms[w]

    def generators(self) -> set:
        return {g for w in self.terms for g in w}

    def sorted_terms(self) -> list[tuple[Word, RatQ]]:
        return sorted(self.terms.items(), key=lambda wc: word_key(wc[0]), reverse=True)

    def __add__(self, other):
        other = _as_ncpoly(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for w, c in other.terms.items():
            v = t.get(w)
            if v is None:
                t[w] = c
            else:
                v = v + c
                if v.is_zero():
                    del t[w]
                else:
                    t[w] = v
        return NCPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_ncpoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_ncpoly(other) - self

    def scale(self, c) -> "NCPoly":
        c = _coerce_coeff(c)
        if c.is_zero():
            return NCPoly._raw({})
        if c.is_one():
            return self
        return NCPoly._raw({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            t: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = c1 * c2
                    prev = t.get(w)
                    if prev is not None:
                        v = prev + v
                    t[w] = v
            return NCPoly._raw({w: c for w, c in t.items() if not c.is_zero()})
        if isinstance(other, (RatQ, LaurentQ, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatQ, LaurentQ, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        o = _as_ncpoly(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, images: Mapping[GenId, "NCPoly"]) -> "NCPoly":
        """Algebra map sending each generator g to images.get(g, g)."""
        out = NCPoly._raw({})
        for w, c in self.terms.items():
            term = NCPoly._raw({(): c})
            for g in w:
                img = images.get(g)
                term = term * (img if img is not None else NCPoly._raw({(g,): RatQ.coerce(1)}))
            out = out + term
        return out

    def map_coeffs(self, fn: Callable[[RatQ], RatQ]) -> "NCPoly":
        return NCPoly({w: fn(c) for w, c in self.terms.items()})

    def specialize(self, q0) -> "NCPoly":
        """Evaluate every coefficient at q = q0 (result has constant coefficients)."""
        return NCPoly({w: c.evaluate(q0) for w, c in self.terms.items()})

    def __repr__(self):
        return f"NCPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            cs = str(c)
            simple = c.is_laurent() and c.num.is_monomial()
            if not w:
                parts.append(cs if simple else f"({cs})")
            elif c.is_one():
                parts.append(word_str(w))
            elif c == RatQ.coerce(-1):
                parts.append("-" + word_str(w))
            else:
                parts.append(f"({cs})*{word_str(w)}")
        s = parts[0]
        for p in parts[1:]:
            s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return s


def _as_ncpoly(x) -> NCPoly | None:
    if isinstance(x, NCPoly):
        return x
    if isinstance(x, (RatQ, LaurentQ, int, Fraction)):
        return NCPoly.const(x)
    return None


# ---------------------------------------------------------------------------
# R-matrix


def _delta(i, j) -> int:
    return 1 if i == j else 0


@dataclass(frozen=True)
class RMatrix:
    """Sparse 4-index tensor R^{ij}_{kl} (1-based indices)."""

    N: int
    entries: dict

    def __getitem__(self, idx) -> LaurentQ:
        return self.entries.get(idx, ZERO)

    def nonzero(self) -> dict:
        return dict(self.entries)


def build_r_matrix(N: int) -> RMatrix:
    """R^{ij}_{kl} = q^{delta_ij} delta_ik delta_jl + (q - q^-1) theta(i - j) delta_il delta_jk."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ent = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            ent[(i, j, i, j)] = Q if i == j else ONE
            if i > j:
                ent[(i, j, j, i)] = QDIFF
    return RMatrix(N, ent)


def r_inverse(R: RMatrix) -> RMatrix:
    """Closed form (R^-1)^{ij}_{kl} = q^{-delta_ij} delta_ik delta_jl - (q - q^-1) theta(i - j) delta_il delta_jk."""
    N = R.N
    ent = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            ent[(i, j, i, j)] = QINV if i == j else ONE
            if i > j:
                ent[(i, j, j, i)] = -QDIFF
    return RMatrix(N, ent)


def r_21(R: RMatrix) -> RMatrix:
    return RMatrix(R.N, {(j, i, l, k): c for (i, j, k, l), c in R.entries.items()})


def omega_tensor(N: int) -> RMatrix:
    """Omega^{ij}_{kl} = delta_il delta_jk (the flip on C^N (x) C^N)."""
    return RMatrix(N, {(i, j, j, i): ONE for i in range(1, N + 1) for j in range(1, N + 1)})


# ---------------------------------------------------------------------------
# matrices with algebra-valued entries


def _is_zero(x) -> bool:
    return x.is_zero()


class AlgMatrix:
    """Operator between tensor products of vertex spaces with algebra entries.

    ``row_shape``/``col_shape`` give the dimension of each leg on the output and
    input side; entries are stored sparsely keyed by (row multi-index, col
    multi-index).  Entries may be LaurentQ, RatQ or NCPoly values.
    """

    __slots__ = ("row_shape", "col_shape", "entries")

    def __init__(self, row_shape: Sequence[int], col_shape: Sequence[int], entries: Mapping | None = None):
        self.row_shape = tuple(row_shape)
        self.col_shape = tuple(col_shape)
        if len(self.row_shape) != len(self.col_shape):
            raise ValueError("row and column leg counts differ")
        self.entries = {k: v for k, v in (entries or {}).items() if not _is_zero(v)}

    @property
    def legs(self) -> int:
        return len(self.row_shape)

    @property
    def rows(self) -> int:
        n = 1
        for d in self.row_shape:
            n *= d
        return n

    @property
    def cols(self) -> int:
        n = 1
        for d in self.col_shape:
            n *= d
        return n

    def __getitem__(self, key):
        r, c = key
        if isinstance(r, int):
            r = (r,)
        if isinstance(c, int):
            c = (c,)
        return self.entries.get((tuple(r), tuple(c)), NCPoly())

    def row_indices(self):
        return product(*(range(1, d + 1) for d in self.row_shape))

    def col_indices(self):
        return product(*(range(1, d + 1) for d in self.col_shape))

    @classmethod
    def identity(cls, shape: Sequence[int]) -> "AlgMatrix":
        shape = tuple(shape)
        ent = {(ix, ix): ONE for ix in product(*(range(1, d + 1) for d in shape))}
        return cls(shape, shape, ent)

    @classmethod
    def from_rmatrix(cls, R: RMatrix) -> "AlgMatrix":
        N = R.N
        return cls((N, N), (N, N), {((i, j), (k, l)): c for (i, j, k, l), c in R.entries.items()})

    @classmethod
    def from_function(cls, row_dim: int, col_dim: int, fn) -> "AlgMatrix":
        ent = {}
        for i in range(1, row_dim + 1):
            for j in range(1, col_dim + 1):
                ent[((i,), (j,))] = fn(i, j)
        return cls((row_dim,), (col_dim,), ent)

    def __matmul__(self, other: "AlgMatrix") -> "AlgMatrix":
        return alg_matmul(self, other)

    def __add__(self, other: "AlgMatrix") -> "AlgMatrix":
        if self.row_shape != other.row_shape or self.col_shape != other.col_shape:
            raise ValueError(f"shape mismatch in sum: {self.shape_str()} vs {other.shape_str()}")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent[k] + v if k in ent else v
        return AlgMatrix(self.row_shape, self.col_shape, ent)

    def __neg__(self):
        return AlgMatrix(self.row_shape, self.col_shape, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "AlgMatrix") -> "AlgMatrix":
        return self + (-other)

    def scale(self, c) -> "AlgMatrix":
        return AlgMatrix(self.row_shape, self.col_shape, {k: v * c for k, v in self.entries.items()})

    def map_entries(self, fn) -> "AlgMatrix":
        return AlgMatrix(self.row_shape, self.col_shape, {k: fn(v) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def shape_str(self) -> str:
        return f"{'x'.join(map(str, self.row_shape))}<-{'x'.join(map(str, self.col_shape))}"

    def components(self) -> list:
        """Nonzero entries in row-major order of (row, col) multi-indices."""
        return [self.entries[k] for k in sorted(self.entries)]

    def __repr__(self):
        return f"AlgMatrix({self.shape_str()}, {len(self.entries)} nonzero)"


def alg_matmul(X: AlgMatrix, Y: AlgMatrix) -> AlgMatrix:
    """Matrix product with entries multiplied in order X-entry * Y-entry."""
    if X.col_shape != Y.row_shape:
        raise ValueError(f"shape mismatch in product: {X.shape_str()} @ {Y.shape_str()}")
    by_row: dict = {}
    for (m, c), v in Y.entries.items():
        by_row.setdefault(m, []).append((c, v))
    acc: dict = {}
    for (r, m), xv in X.entries.items():
        for c, yv in by_row.get(m, ()):
            p = xv * yv
            k = (r, c)
            acc[k] = acc[k] + p if k in acc else p
    return AlgMatrix(X.row_shape, Y.col_shape, acc)


def place_on_legs(X: AlgMatrix, legs: Sequence[int], shape: Sequence[int | None]) -> AlgMatrix:
    """Embed X into the tensor legs ``legs`` (1-based) of an n-leg space.

    ``shape`` has one entry per leg of the target space; entries for the legs
    carrying X may be None (their dimensions come from X), the rest give the
    dimension of the identity factor.  ``place_on_legs(R, (2, 1), [N, N])``
    is R_21.
    """
    legs = tuple(legs)
    n = len(shape)
    if len(legs) != X.legs:
        raise ValueError(f"operator has {X.legs} legs, got {len(legs)} positions")
    if len(set(legs)) != len(legs) or not all(1 <= l <= n for l in legs):
        raise ValueError("leg positions must be distinct and within range")
    rshape, cshape = [0] * n, [0] * n
    for p in range(n):
        if p + 1 in legs:
            k = legs.index(p + 1)
            if shape[p] is not None and shape[p] not in (X.row_shape[k], X.col_shape[k]):
                raise ValueError(f"leg {p + 1}: dimension {shape[p]} does not match operator")
            rshape[p], cshape[p] = X.row_shape[k], X.col_shape[k]
        else:
            if shape[p] is None:
                raise ValueError(f"leg {p + 1}: identity leg needs a dimension")
            rshape[p] = cshape[p] = shape[p]
    free = [p for p in range(n) if p + 1 not in legs]
    free_ranges = [range(1, shape[p] + 1) for p in free]
    ent = {}
    for (r, c), v in X.entries.items():
        for fix in product(*free_ranges):
            row, col = [0] * n, [0] * n
            for k, l in enumerate(legs):
                row[l - 1], col[l - 1] = r[k], c[k]
            for p, ix in zip(free, fix):
                row[p] = col[p] = ix
            ent[(tuple(row), tuple(col))] = v
    return AlgMatrix(rshape, cshape, ent)


def flip(dim1: int, dim2: int) -> AlgMatrix:
    """tau: C^dim1 (x) C^dim2 -> C^dim2 (x) C^dim1, e_k (x) e_l -> e_l (x) e_k."""
    ent = {}
    for k in range(1, dim1 + 1):
        for l in range(1, dim2 + 1):
            ent[((l, k), (k, l))] = ONE
    return AlgMatrix((dim2, dim1), (dim1, dim2), ent)


def omega(dim_out1: int, dim_out2: int) -> AlgMatrix:
    """Omega = sum E^i_j (x) E^j_i, mapping C^b (x) C^a -> C^a (x) C^b for a = dim_out1, b = dim_out2."""
    return flip(dim_out2, dim_out1)


# ---------------------------------------------------------------------------
# axiom checks


def _exact_equal(X: AlgMatrix, Y: AlgMatrix) -> tuple[bool, object]:
    D = X - Y
    if D.is_zero():
        return True, None
    k = sorted(D.entries)[0]
    return False, {"row": list(k[0]), "col": list(k[1]), "difference": str(D.entries[k])}


def braid_matrix(N: int) -> AlgMatrix:
    """R-check = tau o R."""
    return flip(N, N) @ AlgMatrix.from_rmatrix(build_r_matrix(N))


def qybe_check(N: int) -> CheckReport:
    with timed() as t:
        Rc = braid_matrix(N)
        B12 = place_on_legs(Rc, (1, 2), [None, None, N])
        B23 = place_on_legs(Rc, (2, 3), [N, None, None])
        lhs = B12 @ B23 @ B12
        rhs = B23 @ B12 @ B23
        ok, wit = _exact_equal(lhs, rhs)
    rep = CheckReport("qybe", PASS if ok else FAIL, {"N": N}, wit,
                      {"nonzero_entries": len(lhs.entries)})
    rep.elapsed_ms = t["ms"]
    return rep


def hecke_check(N: int) -> CheckReport:
    with timed() as t:
        R = AlgMatrix.from_rmatrix(build_r_matrix(N))
        Ri = AlgMatrix.from_rmatrix(r_inverse(build_r_matrix(N)))
        P = flip(N, N)
        lhs = P @ R - Ri @ P
        rhs = AlgMatrix.identity((N, N)).scale(QDIFF)
        ok, wit = _exact_equal(lhs, rhs)
        if ok:
            ok2, wit = _exact_equal(R @ Ri, AlgMatrix.identity((N, N)))
            ok = ok and ok2
    rep = CheckReport("hecke", PASS if ok else FAIL, {"N": N}, wit)
    rep.elapsed_ms = t["ms"]
    return rep
