# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse Gaussian elimination over a prime field (p < 2**31)."""

from libc.stdlib cimport malloc, free, calloc
from libc.stdint cimport int64_t


cdef inline int64_t _powmod(int64_t b, int64_t e, int64_t m):
    cdef int64_t r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


def rank_mod_p(rows, Py_ssize_t ncols, int64_t p):
    """Rank of the sparse integer rows modulo the prime ``p``."""
    cdef int64_t *work = <int64_t *> calloc(ncols if ncols > 0 else 1, sizeof(int64_t))
    cdef int **pcols = <int **> calloc(ncols if ncols > 0 else 1, sizeof(int *))
    cdef int64_t **pvals = <int64_t **> calloc(ncols if ncols > 0 else 1, sizeof(int64_t *))
    cdef int *plen = <int *> calloc(ncols if ncols > 0 else 1, sizeof(int))
    if work == NULL or pcols == NULL or pvals == NULL or plen == NULL:
        free(work); free(pcols); free(pvals); free(plen)
        raise MemoryError()
    cdef Py_ssize_t rank = 0, c, k, hi, n
    cdef int64_t v, f, inv
    cdef int *cc
    cdef int64_t *vv
    try:
        for cols, vals in rows:
            hi = -1
            for c, v in zip(cols, vals):
                v %= p
                if v < 0:
                    v += p
                work[c] = (work[c] + v) % p
                if c > hi:
                    hi = c
            c = hi
            while c >= 0:
                if work[c] == 0:
                    c -= 1
                    continue
                if plen[c] == 0:
                    # new pivot: store the normalized remainder of the row
                    inv = _powmod(work[c], p - 2, p)
                    n = 0
                    for k in range(c + 1):
                        if work[k] != 0:
                            n += 1
                    cc = <int *> malloc(n * sizeof(int))
                    vv = <int64_t *> malloc(n * sizeof(int64_t))
                    if cc == NULL or vv == NULL:
                        free(cc); free(vv)
                        raise MemoryError()
                    n = 0
                    for k in range(c + 1):
                        if work[k] != 0:
                            cc[n] = <int> k
                            vv[n] = work[k] * inv % p
                            work[k] = 0
                            n += 1
                    pcols[c] = cc
                    pvals[c] = vv
                    plen[c] = <int> n
                    rank += 1
                    break
                f = work[c]
                cc = pcols[c]
                vv = pvals[c]
                for k in range(plen[c]):
                    work[cc[k]] = (work[cc[k]] - f * vv[k]) % p
                    if work[cc[k]] < 0:
                        work[cc[k]] += p
                c -= 1
            # clear leftovers of a row that reduced to zero or was stored
            for k in range(hi + 1):
                work[k] = 0
        return rank
    finally:
        for k in range(ncols):
            if plen[k]:
                free(pcols[k])
                free(pvals[k])
        free(work); free(pcols); free(pvals); free(plen)
