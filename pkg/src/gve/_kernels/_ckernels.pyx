# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the integer kernels; same contracts as ``_pure``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def superadditivity_violation(vals, sum_idx):
    cdef long long[:] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef int[:, :] s = np.ascontiguousarray(sum_idx, dtype=np.int32)
    cdef Py_ssize_t n = v.shape[0], i, j
    cdef int k
    for i in range(n):
        for j in range(i, n):
            k = s[i, j]
            if k >= 0 and v[i] + v[j] > v[k]:
                return int(i), int(j)
    return -1, -1


def negation_violation(vals, neg_idx):
    cdef long long[:] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef int[:] ng = np.ascontiguousarray(neg_idx, dtype=np.int32)
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        if v[i] + v[ng[i]] < -1:
            return int(i)
    return -1


cdef inline long long _floordiv2(long long a):
    return a // 2 if a >= 0 else -((-a + 1) // 2)


def enumerate_tables(order, plans, int bound, int n, int limit):
    cdef Py_ssize_t depth = len(order)
    cdef Py_ssize_t total = 0, pos, c, m
    cdef long long lo, hi, val
    cdef int kind, a, b
    offsets_py = [0]
    flat = []
    running = 0
    for p in plans:
        for con in p:
            flat.extend(con)
        running += len(p)
        offsets_py.append(running)
    cdef int[:] off = np.asarray(offsets_py, dtype=np.int32)
    cdef int[:] cons = np.asarray(flat if flat else [0, 0, 0], dtype=np.int32)
    cdef int[:] ordr = np.asarray(order if depth else [0], dtype=np.int32)
    cdef long long[:] f = np.zeros(max(n, 1), dtype=np.int64)
    cdef long long[:] cur = np.zeros(depth + 1, dtype=np.int64)
    cdef long long[:] his = np.zeros(depth + 1, dtype=np.int64)
    out = []
    if depth == 0:
        return [tuple([0] * n)]
    pos = 0
    while True:
        # compute bounds for the current depth
        lo, hi = -bound, bound
        for c in range(off[pos], off[pos + 1]):
            kind = cons[3 * c]
            a = cons[3 * c + 1]
            b = cons[3 * c + 2]
            if kind == 0:
                val = f[a] + f[b]
                if val > lo:
                    lo = val
            elif kind == 1:
                val = f[a] - f[b]
                if val < hi:
                    hi = val
            elif kind == 2:
                val = _floordiv2(f[a])
                if val < hi:
                    hi = val
            else:
                val = -1 - f[a]
                if val > lo:
                    lo = val
        cur[pos] = lo
        his[pos] = hi
        # advance / backtrack
        while True:
            if cur[pos] > his[pos]:
                if pos == 0:
                    return out
                pos -= 1
                cur[pos] += 1
                continue
            f[ordr[pos]] = cur[pos]
            if pos == depth - 1:
                out.append(tuple([int(f[m]) for m in range(n)]))
                if limit and len(out) >= limit:
                    return out
                cur[pos] += 1
                continue
            pos += 1
            break
