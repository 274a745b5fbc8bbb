"""Pure-Python elimination kernels (fallback for the compiled ``_ckernels``).

Both kernels take a list of rows (lists of ints), work on copies, and return
the nonzero rows of the reduced row echelon form together with the pivot
columns.  The signatures are mirrored exactly by ``_ckernels.pyx``.
"""


def rref_integer(rows, ncols):
    """Fraction-free Gauss-Jordan elimination over the integers.

    Bareiss' exact-division update is applied to every row other than the
    pivot row, so after processing all columns each pivot entry equals the
    final divisor ``det``.  Returns ``(rows, pivots, det)`` where dividing the
    returned rows by ``det`` gives the rational RREF.
    """
    m = [list(r) for r in rows if any(r)]
    nrows = len(m)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        prow = m[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        if row[j]:
                            row[j] = row[j] * piv // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots, prev


def rref_modp(rows, ncols, p):
    """Gauss-Jordan elimination over F_p with monic pivots."""
    m = [[v % p for v in r] for r in rows]
    m = [r for r in m if any(r)]
    nrows = len(m)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and m[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            m[k], m[r] = m[r], m[k]
        prow = m[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            for j in range(c, ncols):
                prow[j] = prow[j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f:
                for j in range(c, ncols):
                    if prow[j]:
                        row[j] = (row[j] - f * prow[j]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots
