"""Compare the compiled and interpreted modular-rank kernels.

Rows are the raw relation multiples of a D_q presentation, i.e. exactly the
matrices the rank cross-check eliminates.

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from qmqv import kernel
from qmqv.quiver import Quiver
from qmqv.relations import full_presentation
from qmqv.verify import _eval_mod, _mod_inv, words_of_length

CASES = [
    ("Kronecker (1,1) D=6", {"u": 1, "v": 1}, [("e", "u", "v")], 6),
    ("Kronecker (1,2) D=4", {"u": 1, "v": 2}, [("e", "u", "v")], 4),
    ("Kronecker (2,2) D=3", {"u": 2, "v": 2}, [("e", "u", "v")], 3),
    ("Jordan d=2 D=3", {"v": 2}, [("l", "v", "v")], 3),
    ("Kronecker (2,2) D=4", {"u": 2, "v": 2}, [("e", "u", "v")], 4),
    ("Calogero-Moser (1,1) D=6", {"u": 1, "v": 1}, [("e", "u", "v"), ("l", "v", "v")], 6),
]


def build_rows(p, D: int, q0: Fraction, prime: int):
    gens = sorted(p.generators)
    qm = q0.numerator * _mod_inv(q0.denominator, prime) % prime
    index = {}
    for k in range(D + 1):
        for w in words_of_length(gens, k):
            index[w] = len(index)
    rows = []
    for r in p.relations:
        coeffs = [(w, _eval_mod(c, qm, prime)) for w, c in r.terms.items()]
        for extra in range(D - r.degree + 1):
            for k in range(extra + 1):
                for x in words_of_length(gens, k):
                    for y in words_of_length(gens, extra - k):
                        rows.append(([index[x + w + y] for w, _ in coeffs], [v for _, v in coeffs]))
    return rows, len(index)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    prime = kernel.DEFAULT_PRIME
    print(f"compiled backend available: {kernel.BACKEND == 'cython'}")
    print(f"{'case':<28}{'rows':>8}{'cols':>8}{'rank':>8}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for name, verts, edges, D in CASES:
        p = full_presentation(Quiver.build(verts, edges), "Dq")
        rows, ncols = build_rows(p, D, Fraction(7, 3), prime)
        r_py = kernel.rank_mod_p_python(rows, ncols, prime)
        t_py = best_of(lambda: kernel.rank_mod_p_python(rows, ncols, prime), args.repeat)
        if kernel.BACKEND == "cython":
            r_cy = kernel.rank_mod_p(rows, ncols, prime)
            assert r_cy == r_py, (name, r_cy, r_py)
            t_cy = best_of(lambda: kernel.rank_mod_p(rows, ncols, prime), args.repeat)
            extra = f"{t_cy:>11.4f}{t_py / t_cy:>8.1f}x"
        else:
            extra = f"{'n/a':>11}{'':>9}"
        print(f"{name:<28}{len(rows):>8}{ncols:>8}{r_py:>8}{t_py:>11.4f}{extra}")


if __name__ == "__main__":
    main()
