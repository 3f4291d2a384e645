"""Exact sparse echelon forms over Q(q).

Vectors are dicts mapping a sortable key (usually a word) to RatQ.  Pivots are
the largest key of each basis vector, so reduction of a vector against the
basis walks downward through the monomial order like a rewriting process.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable

from .coeff import RatQ


def _axpy(target: dict, row: dict, factor: RatQ) -> None:
    """target -= factor * row, in place."""
    for k, c in row.items():
        v = target.get(k)
        d = c * factor
        if v is None:
            target[k] = -d
        else:
            v = v - d
            if v.is_zero():
                del target[k]
            else:
                target[k] = v


class Echelon:
    """Incrementally built echelon basis with leading-key pivots."""

    def __init__(self, key: Callable[[Hashable], object] | None = None):
        self.key = key or (lambda w: w)
        self.pivots: dict = {}  # leading monomial -> (row, inverse of leading coeff)
        self._lead_cache: dict = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _lead(self, vec: dict):
        return max(vec, key=self.key)

    def reduce(self, vec: dict, record: list | None = None) -> dict:
        """Return vec reduced by the basis (copy); optional log of (pivot, factor)."""
        v = dict(vec)
        out = {}
        key = self.key
        while v:
            lead = max(v, key=key)
            piv = self.pivots.get(lead)
            if piv is None:
                out[lead] = v.pop(lead)
                continue
            row, inv = piv
            f = v[lead] * inv
            if record is not None:
                record.append((lead, f))
            _axpy(v, row, f)
        return out

    def add(self, vec: dict) -> bool:
        """Insert vec; return True iff the rank went up."""
        v = self._head_reduce(vec)
        if not v:
            return False
        lead = max(v, key=self.key)
        self.pivots[lead] = (v, v[lead].inverse())
        return True

    def _head_reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if not c.is_zero()}
        key = self.key
        while v:
            lead = max(v, key=key)
            piv = self.pivots.get(lead)
            if piv is None:
                return v
            row, inv = piv
            _axpy(v, row, v[lead] * inv)
        return v

    def contains(self, vec: dict) -> bool:
        return not self._head_reduce(vec)


def independent_subset(vectors: Iterable[dict], key=None) -> list[int]:
    """Indices of a greedy maximal independent subset, in input order."""
    ech = Echelon(key)
    keep = []
    for i, v in enumerate(vectors):
        if ech.add(v):
            keep.append(i)
    return keep


def rank(vectors: Iterable[dict], key=None) -> int:
    ech = Echelon(key)
    for v in vectors:
        ech.add(v)
    return ech.rank
