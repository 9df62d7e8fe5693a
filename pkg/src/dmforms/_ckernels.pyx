# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated convolution kernel (mirrors ``dmforms._pure``)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef void _ranges(const long long[:, ::1] a, Py_ssize_t[::1] lo, Py_ssize_t[::1] hi) noexcept nogil:
    cdef Py_ssize_t i, s, n = a.shape[0], w = a.shape[1]
    for i in range(n):
        lo[i] = w
        hi[i] = 0
        for s in range(w):
            if a[i, s] != 0:
                lo[i] = s
                break
        for s in range(w - 1, -1, -1):
            if a[i, s] != 0:
                hi[i] = s + 1
                break


def mul_trunc(a, b, Py_ssize_t nout, long long p, long long maxpairs):
    """Rows ``0..nout-1`` of the 2D product of ``a`` and ``b`` reduced mod ``p``."""
    cdef const long long[:, ::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const long long[:, ::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t na = av.shape[0], la = av.shape[1]
    cdef Py_ssize_t nb = bv.shape[0], lb = bv.shape[1]
    cdef Py_ssize_t width = la + lb - 1
    if width < 0:
        width = 0
    if nout < 0:
        nout = 0
    out = np.zeros((nout, width), dtype=np.int64)
    if nout == 0 or width == 0 or na == 0 or nb == 0:
        return out
    cdef long long[:, ::1] ov = out
    cdef Py_ssize_t[::1] alo = np.empty(na, dtype=np.intp)
    cdef Py_ssize_t[::1] ahi = np.empty(na, dtype=np.intp)
    cdef Py_ssize_t[::1] blo = np.empty(nb, dtype=np.intp)
    cdef Py_ssize_t[::1] bhi = np.empty(nb, dtype=np.intp)
    cdef long long[::1] count = np.zeros(nout, dtype=np.int64)
    cdef Py_ssize_t i, j, k, s, t
    cdef long long x
    with nogil:
        _ranges(av, alo, ahi)
        _ranges(bv, blo, bhi)
        for i in range(na):
            if i >= nout:
                break
            if alo[i] >= ahi[i]:
                continue
            for j in range(nb):
                k = i + j
                if k >= nout:
                    break
                if blo[j] >= bhi[j]:
                    continue
                for s in range(alo[i], ahi[i]):
                    x = av[i, s]
                    if x == 0:
                        continue
                    for t in range(blo[j], bhi[j]):
                        ov[k, s + t] += x * bv[j, t]
                count[k] += 1
                if count[k] >= maxpairs:
                    for s in range(width):
                        ov[k, s] %= p
                    count[k] = 0
        for k in range(nout):
            for s in range(width):
                ov[k, s] %= p
    return out
