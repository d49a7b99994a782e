# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank-mod-p elimination kernel.

Entries must already be reduced into [0, p) and p must be below 2**31 so
that every product fits in a signed 64-bit integer.
"""
import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef i64 _inv_mod(i64 x, i64 p):
    cdef i64 result = 1, base = x % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rank_mod_p(cnp.ndarray a_in, long long p):
    """Rank of an integer matrix over GF(p); the input array is not modified."""
    cdef cnp.ndarray[i64, ndim=2, mode="c"] arr = np.ascontiguousarray(a_in, dtype=np.int64).copy()
    cdef i64[:, ::1] a = arr
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f, t
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv_mod(a[r, c], p)
        for j in range(c, ncols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(r + 1, nrows):
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                if a[r, j] != 0:
                    t = (a[i, j] - f * a[r, j]) % p
                    if t < 0:
                        t += p
                    a[i, j] = t
        r += 1
    return r
