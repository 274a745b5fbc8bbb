# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernels; same contract as ``_pykernels``."""

from libc.stdlib cimport malloc, free

# moduli at or above this bound fall back to Python ints (products overflow int64)
MODP_LIMIT = 2 ** 31


def rref_integer(rows, Py_ssize_t ncols):
    cdef list m = [list(row_) for row_ in rows if any(row_)]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef list prow, row, pivots = []
    cdef object prev = 1, piv, f, v
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and (<list>m[p])[c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        prow = <list>m[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>m[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        v = row[j]
                        if v:
                            row[j] = v * piv // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots, prev


def rref_modp(rows, Py_ssize_t ncols, long long p):
    if p >= MODP_LIMIT:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef list src = [row_ for row_ in rows if any(v % p for v in row_)]
    cdef Py_ssize_t nrows = len(src)
    if nrows == 0 or ncols == 0:
        return [], []
    cdef long long *a = <long long *>malloc(nrows * ncols * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, k, c, r = 0
    cdef long long f, inv, t
    cdef list pivots = []
    try:
        for i in range(nrows):
            row = src[i]
            for j in range(ncols):
                a[i * ncols + j] = row[j] % p
        for c in range(ncols):
            if r == nrows:
                break
            k = r
            while k < nrows and a[k * ncols + c] == 0:
                k += 1
            if k == nrows:
                continue
            if k != r:
                for j in range(ncols):
                    t = a[k * ncols + j]
                    a[k * ncols + j] = a[r * ncols + j]
                    a[r * ncols + j] = t
            inv = pow(a[r * ncols + c], -1, p)
            if inv != 1:
                for j in range(c, ncols):
                    a[r * ncols + j] = a[r * ncols + j] * inv % p
            for i in range(nrows):
                if i == r:
                    continue
                f = a[i * ncols + c]
                if f:
                    for j in range(c, ncols):
                        t = a[r * ncols + j]
                        if t:
                            a[i * ncols + j] = (a[i * ncols + j] - f * t) % p
                            if a[i * ncols + j] < 0:
                                a[i * ncols + j] += p
            pivots.append(c)
            r += 1
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(a)
    return out, pivots
