# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops; same signatures as _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t

cnp.import_array()


def ruler_word(bytes gamma, Py_ssize_t n):
    if n <= 0:
        return b""
    if n.bit_length() > len(gamma):
        raise ValueError("gamma too short for the requested length")
    cdef const unsigned char[:] g = gamma
    out = bytearray(n)
    cdef unsigned char[:] o = out
    cdef Py_ssize_t i
    cdef uint64_t k
    cdef int v
    for i in range(n):
        k = <uint64_t>(i + 1)
        v = 0
        while (k & 1) == 0:
            k >>= 1
            v += 1
        o[i] = g[v]
    return bytes(out)


def rewrite_grid(stages, int depth):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << depth
    cdef cnp.ndarray[int64_t, ndim=1] x = np.arange(size, dtype=np.int64)
    cdef int64_t[:] xv = x
    cdef Py_ssize_t i, r, nr
    cdef int64_t w, mask
    cdef int found
    cdef cnp.ndarray[int64_t, ndim=2] tab
    cdef int64_t[:, :] tv
    for rules in stages:
        usable = [(s, l, d) for (s, l, d) in rules if l <= depth]
        nr = len(usable)
        tab = np.zeros((max(nr, 1), 3), dtype=np.int64)
        for r in range(nr):
            tab[r, 0] = usable[r][0]
            tab[r, 1] = (<int64_t>1 << usable[r][1]) - 1
            tab[r, 2] = usable[r][2]
        tv = tab
        for i in range(size):
            w = xv[i]
            if w < 0:
                continue
            found = 0
            for r in range(nr):
                mask = tv[r, 1]
                if (w & mask) == tv[r, 0]:
                    xv[i] = (w & ~mask) | tv[r, 2]
                    found = 1
                    break
            if not found:
                xv[i] = -1
    return x


cdef inline int _b(uint64_t m, int idx) nogil:
    return <int>((m >> idx) & 1)


def relation_profiles(masks, int n):
    cdef cnp.ndarray[uint64_t, ndim=1] arr = np.ascontiguousarray(masks, dtype=np.uint64).ravel()
    cdef Py_ssize_t size = arr.shape[0]
    cdef cnp.ndarray[uint8_t, ndim=1] out = np.zeros(size, dtype=np.uint8)
    cdef uint64_t[:] av = arr
    cdef uint8_t[:] ov = out
    cdef Py_ssize_t t
    cdef int a, b, c, refl, irr, sym, anti, trans, ab, ba
    cdef uint64_t m
    with nogil:
        for t in range(size):
            m = av[t]
            refl = 1
            irr = 1
            sym = 1
            anti = 1
            trans = 1
            for a in range(n):
                if _b(m, a * n + a):
                    irr = 0
                else:
                    refl = 0
            for a in range(n):
                for b in range(n):
                    ab = _b(m, a * n + b)
                    if not ab:
                        continue
                    ba = _b(m, b * n + a)
                    if not ba:
                        sym = 0
                    elif a != b:
                        anti = 0
                    if trans:
                        for c in range(n):
                            if _b(m, b * n + c) and not _b(m, a * n + c):
                                trans = 0
                                break
            ov[t] = refl | (irr << 1) | (sym << 2) | (anti << 3) | (trans << 4)
    return out


def transform_relations(masks, int n, str kind):
    if kind not in ("r", "rp", "s", "sp"):
        raise ValueError(f"unknown transform kind {kind!r}")
    if 4 * n * n > 64:
        raise ValueError("doubled relation does not fit in 64 bits")
    cdef cnp.ndarray[uint64_t, ndim=1] arr = np.ascontiguousarray(masks, dtype=np.uint64).ravel()
    cdef Py_ssize_t size = arr.shape[0]
    cdef cnp.ndarray[uint64_t, ndim=1] out = np.zeros(size, dtype=np.uint64)
    cdef uint64_t[:] av = arr
    cdef uint64_t[:] ov = out
    cdef int m = 2 * n
    cdef int diag = 1 if kind in ("r", "s") else 0
    cdef int both = 1 if kind in ("s", "sp") else 0
    cdef uint64_t base = 0
    cdef int p, x, y
    cdef Py_ssize_t t
    cdef uint64_t src, r, bit
    if diag:
        for p in range(m):
            base |= (<uint64_t>1) << (p * m + p)
    with nogil:
        for t in range(size):
            src = av[t]
            r = base
            # branch-free: random masks defeat the branch predictor
            for x in range(n):
                for y in range(n):
                    bit = (src >> (x * n + y)) & 1
                    r |= bit << (x * m + y + n)
                    r |= (bit & both) << ((y + n) * m + x)
            ov[t] = r
    return out
