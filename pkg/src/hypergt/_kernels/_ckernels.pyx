# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over packed uint64 bitsets.

Same functions, signatures and results as ``_pykernels``.  Inputs arrive as
Python int bitmasks and are packed into ``(k, words)`` uint64 arrays.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    int popcountll "__builtin_popcountll"(unsigned long long) nogil

cdef uint64_t WORD_MASK = 0xFFFFFFFFFFFFFFFF


cdef int _words(int n):
    return max(1, (n + 63) >> 6)


def _pack(masks, int n):
    cdef int w = _words(n)
    cdef Py_ssize_t k = len(masks)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] out = np.zeros((k, w), dtype=np.uint64)
    cdef Py_ssize_t i
    cdef int j
    for i in range(k):
        x = masks[i]
        for j in range(w):
            out[i, j] = <uint64_t>(x & WORD_MASK)
            x >>= 64
            if not x:
                break
    return out


def _unpack_row(cnp.uint64_t[:] row):
    acc = 0
    cdef Py_ssize_t j
    for j in range(row.shape[0] - 1, -1, -1):
        acc = (acc << 64) | <object>row[j]
    return acc


cdef inline bint _disjoint(const uint64_t* a, const uint64_t* b, int w) nogil:
    cdef int j
    for j in range(w):
        if a[j] & b[j]:
            return False
    return True


cdef inline int _diff_count(const uint64_t* a, const uint64_t* b, int w) nogil:
    # |a \ b|
    cdef int j, c = 0
    for j in range(w):
        c += popcountll(a[j] & ~b[j])
    return c


cdef void _clean_into(uint64_t[:, ::1] R, uint64_t[:, ::1] E, uint64_t[:, ::1] C) nogil:
    cdef Py_ssize_t t = R.shape[0], m = E.shape[0]
    cdef int w = <int>E.shape[1]
    cdef Py_ssize_t i, k
    cdef int j
    for i in range(m):
        for j in range(w):
            C[i, j] = 0
        for k in range(t):
            if _disjoint(&R[k, 0], &E[i, 0], w):
                for j in range(w):
                    C[i, j] |= R[k, j]


def clean_masks(rows, edges, int n):
    cdef uint64_t[:, ::1] R = _pack(rows, n)
    cdef uint64_t[:, ::1] E = _pack(edges, n)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] C = np.zeros((E.shape[0], E.shape[1]), dtype=np.uint64)
    cdef uint64_t[:, ::1] Cv = C
    with nogil:
        _clean_into(R, E, Cv)
    return [_unpack_row(C[i]) for i in range(C.shape[0])]


def first_discard_violation(rows, edges, int p, int n):
    cdef uint64_t[:, ::1] R = _pack(rows, n)
    cdef uint64_t[:, ::1] E = _pack(edges, n)
    cdef Py_ssize_t m = E.shape[0]
    cdef int w = <int>E.shape[1]
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] C = np.zeros((m, w), dtype=np.uint64)
    cdef uint64_t[:, ::1] Cv = C
    cdef Py_ssize_t i, j
    cdef Py_ssize_t bad_i = -1, bad_j = -1
    with nogil:
        _clean_into(R, E, Cv)
        for j in range(m):
            for i in range(m):
                if i == j:
                    continue
                if _diff_count(&E[i, 0], &E[j, 0], w) >= p and _disjoint(&E[i, 0], &Cv[j, 0], w):
                    bad_i = i
                    bad_j = j
                    break
            if bad_i >= 0:
                break
    if bad_i < 0:
        return None
    return int(bad_i), int(bad_j)


def response_masks(rows, edges, int n):
    cdef uint64_t[:, ::1] R = _pack(rows, n)
    cdef uint64_t[:, ::1] E = _pack(edges, n)
    cdef Py_ssize_t t = R.shape[0], m = E.shape[0]
    cdef int w = <int>E.shape[1]
    cdef int tw = max(1, <int>((t + 63) >> 6))
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] S = np.zeros((m, tw), dtype=np.uint64)
    cdef uint64_t[:, ::1] Sv = S
    cdef Py_ssize_t i, k
    with nogil:
        for i in range(m):
            for k in range(t):
                if not _disjoint(&R[k, 0], &E[i, 0], w):
                    Sv[i, k >> 6] |= (<uint64_t>1) << (k & 63)
    return [_unpack_row(S[i]) for i in range(m)]


def prune_keep(edges, int b, int n):
    cdef uint64_t[:, ::1] E = _pack(edges, n)
    cdef Py_ssize_t m = E.shape[0]
    cdef int w = <int>E.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] keep = np.ones(m, dtype=np.uint8)
    cdef cnp.uint8_t[:] kv = keep
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            for j in range(m):
                if i != j and _diff_count(&E[j, 0], &E[i, 0], w) >= b:
                    kv[i] = 0
                    break
    return [bool(x) for x in keep]


def pair_stats(edges, int n):
    cdef uint64_t[:, ::1] E = _pack(edges, n)
    cdef Py_ssize_t m = E.shape[0]
    cdef int w = <int>E.shape[1]
    if m < 2:
        return None, None, None, False
    cdef int min_diff = -1, max_diff = 0, max_inter = 0, diff, inter, k
    cdef bint nested = False
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                diff = _diff_count(&E[j, 0], &E[i, 0], w)
                if diff > max_diff:
                    max_diff = diff
                if diff == 0:
                    nested = True
                elif min_diff < 0 or diff < min_diff:
                    min_diff = diff
                if j > i:
                    inter = 0
                    for k in range(w):
                        inter += popcountll(E[i, k] & E[j, k])
                    if inter > max_inter:
                        max_inter = inter
    return (None if min_diff < 0 else min_diff), max_diff, max_inter, bool(nested)


# ---------------------------------------------------------------------------
# exhaustive search for a separable matrix (vertex count <= 64, t <= 62)

cdef struct SearchState:
    int n
    int t
    int first
    uint64_t used
    uint64_t* cols
    uint64_t* done          # ORs of completed edges
    int ndone
    int* start              # edges closing at vertex k: closing[start[k]:start[k+1]]
    uint64_t* closing


cdef inline uint64_t _orof(SearchState* s, uint64_t e) nogil:
    cdef uint64_t acc = 0
    cdef int k = 0
    while e:
        if e & 1:
            acc |= s.cols[k]
        e >>= 1
        k += 1
    return acc


cdef bint _rec(SearchState* s, int k) nogil:
    if k == s.n:
        return True
    if not ((s.used >> k) & 1):
        s.cols[k] = 0
        return _rec(s, k + 1)
    cdef uint64_t full = (<uint64_t>1) << s.t
    cdef uint64_t c, ncand, r
    cdef int a, d, mark
    cdef bint ok
    if k == s.first:
        ncand = s.t + 1
    else:
        ncand = full
    for c in range(ncand):
        if k == s.first:
            s.cols[k] = ((<uint64_t>1) << c) - 1
        else:
            s.cols[k] = c
        mark = s.ndone
        ok = True
        for a in range(s.start[k], s.start[k + 1]):
            r = _orof(s, s.closing[a])
            for d in range(s.ndone):
                if s.done[d] == r:
                    ok = False
                    break
            if not ok:
                break
            s.done[s.ndone] = r
            s.ndone += 1
        if ok and _rec(s, k + 1):
            return True
        s.ndone = mark
    s.cols[k] = 0
    return False


def separable_search(edges, int n, int t):
    m = len(edges)
    if m <= 1:
        return [0] * n
    if n > 64 or t > 62:
        from . import _pykernels
        return _pykernels.separable_search(edges, n, t)
    nonempty = sorted((e for e in edges if e), key=lambda e: e.bit_length())
    has_empty = len(nonempty) < m
    cdef SearchState s
    s.n = n
    s.t = t
    s.used = 0
    s.cols = <uint64_t*>malloc(n * sizeof(uint64_t))
    s.done = <uint64_t*>malloc((m + 1) * sizeof(uint64_t))
    s.start = <int*>malloc((n + 1) * sizeof(int))
    s.closing = <uint64_t*>malloc((len(nonempty) + 1) * sizeof(uint64_t))
    cdef int k, a = 0
    cdef bint found
    try:
        for k in range(n):
            s.cols[k] = 0
            s.start[k] = a
            while a < len(nonempty) and nonempty[a].bit_length() - 1 == k:
                s.closing[a] = <uint64_t>nonempty[a]
                s.used |= <uint64_t>nonempty[a]
                a += 1
        s.start[n] = a
        s.ndone = 0
        if has_empty:
            s.done[0] = 0
            s.ndone = 1
        if s.used == 0:
            s.first = 0
        else:
            s.first = 0
            while not ((s.used >> s.first) & 1):
                s.first += 1
        with nogil:
            found = _rec(&s, 0)
        if not found:
            return None
        return [int(s.cols[k]) for k in range(n)]
    finally:
        free(s.cols)
        free(s.done)
        free(s.start)
        free(s.closing)
