"""Quivers, dimension vectors, doubling, roots and the flatness criterion."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, timed


class QuiverError(ValueError):
    """Malformed quiver input; the message names the offending location."""


@dataclass(frozen=True)
class Vertex:
    id: str
    dim: int


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vids = [v.id for v in self.vertices]
        if len(set(vids)) != len(vids):
            raise QuiverError("duplicate vertex id")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise QuiverError("duplicate edge id")
        for e in self.edges:
            for end in (e.src, e.tgt):
                if end not in vids:
                    raise QuiverError(f"edge {e.id!r}: unknown vertex {end!r}")

    @classmethod
    def build(cls, vertices: Mapping[str, int] | list, edges: list) -> "Quiver":
        """Convenience constructor: ``Quiver.build({"u": 1, "v": 2}, [("e", "u", "v")])``."""
        if isinstance(vertices, Mapping):
            vs = tuple(Vertex(k, int(d)) for k, d in vertices.items())
        else:
            vs = tuple(Vertex(k, int(d)) for k, d in vertices)
        return cls(vs, tuple(Edge(*e) for e in edges))

    def dim(self, v: str) -> int:
        for x in self.vertices:
            if x.id == v:
                return x.dim
        raise KeyError(v)

    @property
    def dims(self) -> dict[str, int]:
        return {v.id: v.dim for v in self.vertices}

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def edge_index(self, eid: str) -> int:
        for i, e in enumerate(self.edges):
            if e.id == eid:
                return i
        raise KeyError(eid)

    def loops_at(self, v: str) -> int:
        return sum(1 for e in self.edges if e.src == v and e.tgt == v)

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in (e.src, e.tgt)]

    def with_dims(self, dims: Mapping[str, int]) -> "Quiver":
        return Quiver(tuple(Vertex(v.id, int(dims.get(v.id, v.dim))) for v in self.vertices), self.edges)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "dim": v.dim} for v in self.vertices],
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges],
        }


def parse_quiver(text: bytes | str) -> Quiver:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise QuiverError(f"input is not UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuiverError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise QuiverError("top level must be an object with 'vertices' and 'edges'")
    raw_v = data.get("vertices")
    raw_e = data.get("edges", [])
    if not isinstance(raw_v, list):
        raise QuiverError("'vertices' must be an array")
    if not isinstance(raw_e, list):
        raise QuiverError("'edges' must be an array")
    vertices, seen = [], set()
    for i, v in enumerate(raw_v):
        loc = f"vertices[{i}]"
        if not isinstance(v, dict) or "id" not in v or "dim" not in v:
            raise QuiverError(f"{loc}: expected object with 'id' and 'dim'")
        vid, dim = v["id"], v["dim"]
        if not isinstance(vid, str) or not vid:
            raise QuiverError(f"{loc}.id: must be a nonempty string")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim <= 0:
            raise QuiverError(f"{loc}.dim: nonpositive or non-integer dimension {dim!r}")
        if vid in seen:
            raise QuiverError(f"{loc}.id: duplicate id {vid!r}")
        seen.add(vid)
        vertices.append(Vertex(vid, dim))
    edges, eseen = [], set()
    for i, e in enumerate(raw_e):
        loc = f"edges[{i}]"
        if not isinstance(e, dict) or not {"id", "src", "tgt"} <= set(e):
            raise QuiverError(f"{loc}: expected object with 'id', 'src', 'tgt'")
        if not isinstance(e["id"], str) or not e["id"]:
            raise QuiverError(f"{loc}.id: must be a nonempty string")
        if e["id"] in eseen:
            raise QuiverError(f"{loc}.id: duplicate id {e['id']!r}")
        eseen.add(e["id"])
        for end in ("src", "tgt"):
            if e[end] not in seen:
                raise QuiverError(f"{loc}.{end}: unknown vertex {e[end]!r}")
        edges.append(Edge(e["id"], e["src"], e["tgt"]))
    return Quiver(tuple(vertices), tuple(edges))


def load_quiver(path) -> Quiver:
    with open(path, "rb") as fh:
        return parse_quiver(fh.read())


# ---------------------------------------------------------------------------
# doubling


ADJOINT_SUFFIX = "^v"


@dataclass(frozen=True)
class DoubledQuiver:
    base: Quiver
    quiver: Quiver
    adjoint_of: dict = field(hash=False, compare=False)

    def adjoint(self, eid: str) -> str:
        return self.adjoint_of[eid]


def double_quiver(q: Quiver) -> DoubledQuiver:
    """Append one reversed edge e^v per base edge, after all base edges."""
    adj = [Edge(e.id + ADJOINT_SUFFIX, e.tgt, e.src) for e in q.edges]
    mapping = {}
    for e, ea in zip(q.edges, adj):
        mapping[e.id] = ea.id
        mapping[ea.id] = e.id
    return DoubledQuiver(q, Quiver(q.vertices, q.edges + tuple(adj)), mapping)


# ---------------------------------------------------------------------------
# root system


def _vec(q: Quiver, d) -> tuple[int, ...]:
    ids = [v.id for v in q.vertices]
    if isinstance(d, Mapping):
        missing = [v for v in ids if v not in d]
        if missing:
            raise KeyError(f"dimension vector missing component(s) {missing}")
        return tuple(int(d[v]) for v in ids)
    d = tuple(int(x) for x in d)
    if len(d) != len(ids):
        raise KeyError("dimension vector has the wrong number of components")
    return d


def _vec_any(q: Quiver, d) -> tuple:
    ids = [v.id for v in q.vertices]
    if isinstance(d, Mapping):
        return tuple(d.get(v, 0) for v in ids)
    return tuple(d)


def p_value(q: Quiver, d) -> int:
    """1 + sum_e d_src d_tgt - sum_v d_v^2."""
    x = _vec(q, d)
    pos = {v.id: i for i, v in enumerate(q.vertices)}
    return 1 + sum(x[pos[e.src]] * x[pos[e.tgt]] for e in q.edges) - sum(c * c for c in x)


def _form(q: Quiver):
    """Symmetric Euler form (x, y) as a closure on index tuples."""
    n = len(q.vertices)
    pos = {v.id: i for i, v in enumerate(q.vertices)}
    adj = [[0] * n for _ in range(n)]
    for e in q.edges:
        adj[pos[e.src]][pos[e.tgt]] += 1
        adj[pos[e.tgt]][pos[e.src]] += 1
    cartan = [[(2 if i == j else 0) - adj[i][j] for j in range(n)] for i in range(n)]

    def pair(x, y):
        return sum(x[i] * cartan[i][j] * y[j] for i in range(n) for j in range(n) if cartan[i][j])

    return cartan, pair


def _connected_support(q: Quiver, x) -> bool:
    pos = {v.id: i for i, v in enumerate(q.vertices)}
    supp = {i for i, c in enumerate(x) if c}
    if not supp:
        return False
    nbrs = {i: set() for i in supp}
    for e in q.edges:
        a, b = pos[e.src], pos[e.tgt]
        if a in supp and b in supp:
            nbrs[a].add(b)
            nbrs[b].add(a)
    start = next(iter(supp))
    seen, stack = {start}, [start]
    while stack:
        for j in nbrs[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen == supp


def is_positive_root(q: Quiver, r) -> bool:
    """Kac's reduction: reflect at loop-free vertices while it lowers the vector.

    Real roots end at a simple root of a loop-free vertex; imaginary roots end in
    the fundamental region with connected support.  Vertices carrying loops get
    no reflection, and their unit vectors count as imaginary simple roots.
    """
    x = list(_vec(q, r))
    if any(c < 0 for c in x):
        raise ValueError("root candidates must be nonnegative")
    if not any(x):
        raise ValueError("zero vector is not a root candidate")
    cartan, _ = _form(q)
    n = len(x)
    loopfree = [q.loops_at(v.id) == 0 for v in q.vertices]
    while True:
        if any(c < 0 for c in x):
            return False
        supp = [i for i in range(n) if x[i]]
        if len(supp) == 1 and x[supp[0]] == 1 and loopfree[supp[0]]:
            return True
        moved = False
        for i in range(n):
            if not loopfree[i]:
                continue
            pr = sum(cartan[i][j] * x[j] for j in range(n))
            if pr > 0:
                x[i] -= pr
                moved = True
                break
        if not moved:
            return _connected_support(q, x)


def positive_roots_below(q: Quiver, d) -> list[tuple[int, ...]]:
    top = _vec(q, d)
    out = []
    for x in product(*(range(c + 1) for c in top)):
        if any(x) and is_positive_root(q, x):
            out.append(tuple(x))
    return out


def _decompositions(d, roots):
    """All multisets (as nondecreasing index lists) of roots summing to d."""
    roots = sorted(roots)

    def rec(rem, start):
        if not any(rem):
            yield []
            return
        for k in range(start, len(roots)):
            r = roots[k]
            if all(a <= b for a, b in zip(r, rem)):
                nxt = tuple(b - a for a, b in zip(r, rem))
                for tail in rec(nxt, k):
                    yield [r] + tail

    yield from rec(tuple(d), 0)


def flatness_report(q: Quiver, d=None, bound: int = 6, lam=None) -> CheckReport:
    """Condition p(d) >= sum p(r_i) over decompositions of d into positive roots.

    With ``lam`` (vertex -> rational, lam . d = 0) only roots r with lam . r = 0
    take part, which is the version relevant to the fibre over lam.
    """
    with timed() as t:
        x = _vec(q, d if d is not None else q.dims)
        ids = [v.id for v in q.vertices]
        params = {"dims": dict(zip(ids, x)), "bound": bound}
        weights = None
        if lam is not None:
            weights = [Fraction(c) for c in _vec_any(q, lam)]
            if sum(w * c for w, c in zip(weights, x)):
                raise ValueError("lam . d must vanish")
            params["lambda"] = {v: str(w) for v, w in zip(ids, weights)}
        pd = p_value(q, x)
        if max(x, default=0) > bound:
            rep = CheckReport("flatness", INCONCLUSIVE, params,
                              details={"p": pd, "reason": f"component exceeds bound {bound}"})
            return rep
        roots = positive_roots_below(q, x)
        if weights is not None:
            roots = [r for r in roots if not sum(w * c for w, c in zip(weights, r))]
        violations, ties, count = [], [], 0
        for parts in _decompositions(x, roots):
            if len(parts) < 2:
                continue
            count += 1
            s = sum(p_value(q, r) for r in parts)
            entry = {"parts": [dict(zip(ids, r)) for r in parts], "sum_p": s}
            if s > pd:
                violations.append(entry)
            elif s == pd:
                ties.append(entry)
        flat = not violations
        strict = flat and not ties
        details = {
            "p": pd,
            "is_root": tuple(x) in set(roots),
            "decompositions": count,
            "flat": flat,
            "strict": strict,
            "equalities": ties,
        }
        status = PASS if flat else FAIL
        witness = violations if violations else None
    rep = CheckReport("flatness", status, params, witness, details)
    rep.elapsed_ms = t["ms"]
    return rep
