"""JSON polynomial schema (version 1) and the text rendering used by the CLI.

A term is ``{"coeff": {"num": [[exp, "p/q"], ...], "den": [...]}, "word": [letter, ...]}``
with letters ``{"edge": "e", "kind": "a", "up": 1, "lo": 2}``; adjoined
inverses are ``{"edge": "", "kind": "inv", "tag": "..."}``.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import LaurentQ, RatQ
from .freealg import GenId, NCPoly, gen_a, gen_d, gen_inv, word_key

SCHEMA = 1


def laurent_json(L: LaurentQ) -> list:
    return [[k, str(c)] for k, c in sorted(L.items())]


def laurent_from_json(data) -> LaurentQ:
    return LaurentQ({int(k): Fraction(c) for k, c in data})


def ratq_json(c: RatQ) -> dict:
    c = RatQ.coerce(c)
    return {"num": laurent_json(c.num), "den": laurent_json(c.den)}


def ratq_from_json(data) -> RatQ:
    return RatQ(laurent_from_json(data["num"]), laurent_from_json(data["den"]))


def poly_json(p: NCPoly) -> list:
    return [{"coeff": ratq_json(c), "word": [g.to_json() for g in w]} for w, c in p.sorted_terms()]


def letter_from_json(d: dict, positions: dict | None = None) -> GenId:
    """Inverse of ``GenId.to_json``; ``positions`` maps edge id -> edge index."""
    if d["kind"] == "inv":
        return gen_inv(d["tag"], d.get("edge", ""))
    pos = (positions or {}).get(d["edge"], 0)
    make = gen_a if d["kind"] == "a" else gen_d
    return make(d["edge"], pos, int(d["up"]), int(d["lo"]))


def poly_from_json(data: list, positions: dict | None = None) -> NCPoly:
    terms = {}
    for t in data:
        w = tuple(letter_from_json(x, positions) for x in t["word"])
        terms[w] = ratq_from_json(t["coeff"])
    return NCPoly(terms)


# ---------------------------------------------------------------------------
# text


def letter_text(g: GenId) -> str:
    if g.rank == 2:
        return f"inv({g.tag})"
    sym = "a" if g.rank == 0 else "∂"
    return f"{sym}({g.edge})^{g.upper}_{g.lower}"


def poly_text(p: NCPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for w, c in sorted(p.terms.items(), key=lambda wc: word_key(wc[0]), reverse=True):
        body = " ".join(letter_text(g) for g in w)
        if c.is_one():
            s, head = "+", body or "1"
        elif (-c).is_one():
            s, head = "-", body or "1"
        else:
            s = "+"
            if c.den.is_one() and all(v < 0 for _, v in c.num.items()):
                s, c = "-", -c
            cs = str(c)
            if body:
                head = f"({cs}) {body}"
            else:
                head = f"({cs})" if " " in cs else cs
        out.append((s, head))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for s, head in out[1:]:
        text += f" {s} {head}"
    return text
