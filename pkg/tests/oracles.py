"""Independent reference implementations used only by the tests.

Nothing here imports the package's rank or tensor code paths, so agreement
is evidence rather than tautology.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def dense_rank(rows) -> int:
    """Plain Gauss-Jordan over Fractions on a list of lists."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def dense_tensor(t):
    a, b, c = t.dims
    out = [[[Fraction(0)] * c for _ in range(b)] for _ in range(a)]
    for (i, j, k), v in t.items():
        out[i][j][k] = v
    return out


def dense_flatten(t, factor):
    """Flattening from a dense array, independent of the library's sparse one."""
    d = dense_tensor(t)
    a, b, c = t.dims
    if factor == "A":
        return [[d[i][j][k] for j in range(b) for k in range(c)] for i in range(a)]
    if factor == "B":
        return [[d[i][j][k] for i in range(a) for k in range(c)] for j in range(b)]
    return [[d[i][j][k] for i in range(a) for j in range(b)] for k in range(c)]


def matmul(x, y):
    return [[sum((x[i][t] * y[t][j] for t in range(len(y))), Fraction(0)) for j in range(len(y[0]))]
            for i in range(len(x))]


def trace(x):
    return sum((x[i][i] for i in range(len(x))), Fraction(0))


def row_major(x):
    return [v for row in x for v in row]


def expand_cubic(form_coeffs, x):
    """Evaluate sum c * (form . x)^3 directly."""
    return sum((c * sum((f * xi for f, xi in zip(form, x)), Fraction(0)) ** 3 for form, c in form_coeffs),
               Fraction(0))


def brute_trilinear(t, x, y, z):
    d = dense_tensor(t)
    a, b, c = t.dims
    return sum((d[i][j][k] * x[i] * y[j] * z[k] for i, j, k in itertools.product(range(a), range(b), range(c))),
               Fraction(0))
