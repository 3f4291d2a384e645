"""Pure-Python sparse Gaussian elimination over a prime field.

Used as the fallback when the compiled extension is unavailable.  Rows are
pairs ``(cols, vals)`` of equal-length integer sequences; columns are
eliminated from the highest index down.
"""

from __future__ import annotations


def rank_mod_p(rows, ncols: int, p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for cols, vals in rows:
        w = {}
        for c, v in zip(cols, vals):
            v %= p
            if v:
                w[c] = (w.get(c, 0) + v) % p
        w = {c: v for c, v in w.items() if v}
        while w:
            lead = max(w)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(w[lead], p - 2, p)
                pivots[lead] = {c: v * inv % p for c, v in w.items()}
                break
            f = w[lead]
            for c, v in piv.items():
                nv = (w.get(c, 0) - f * v) % p
                if nv:
                    w[c] = nv
                else:
                    w.pop(c, None)
    return len(pivots)
