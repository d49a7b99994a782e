"""Pure numpy fallback for the rank-mod-p kernel.

Same contract as the compiled ``_modrank`` extension: entries reduced into
``[0, p)``, ``p < 2**31``.
"""
import numpy as np


def rank_mod_p(a_in, p):
    a = np.array(a_in, dtype=np.int64, copy=True)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = a[r + 1:, c]
        rows = np.flatnonzero(below)
        if rows.size:
            rows += r + 1
            a[rows, c:] = (a[rows, c:] - np.outer(a[rows, c], a[r, c:]) % p) % p
        r += 1
    return r
