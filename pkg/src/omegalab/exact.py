"""Exact rational matrices, certified rank and a portable seeded generator.

Scalars are :class:`fractions.Fraction`, which keeps numerator and
denominator coprime with a positive denominator after every operation.

Rank is computed in two stages.  The matrix is scaled row by row to integers
and reduced modulo a 31-bit prime; the rank over GF(p) never exceeds the rank
over Q, so a full rank modulo p is already exact.  Only rank-deficient
matrices fall through to exact integer elimination: a sparse variant with
Markowitz-style pivoting for sparse inputs (Koszul matrices), fraction-free
Bareiss for dense ones.
"""
from __future__ import annotations

import builtins
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ShapeError

Scalar = Fraction

_MASK64 = (1 << 64) - 1


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"n/d"`` strings to a Fraction.

    Floats are refused: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class ExactMatrix:
    """Sparse rational matrix; absent entries are zero."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative matrix shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = to_scalar(v)
            if v:
                clean[(r, c)] = v
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> ExactMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ShapeError("ragged rows")
            for j, v in enumerate(row):
                entries[(i, j)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> ExactMatrix:
        """Matrix sending basis vector ``e_i`` to ``e_perm[i]``."""
        n = len(perm)
        return cls(n, n, {(perm[i], i): 1 for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(key)
        return self._entries.get((r, c), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self._entries.items())))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other._entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), v in self._entries.items():
            for j, w in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return ExactMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ShapeError(f"vector of length {len(vec)} for a {self.shape} matrix")
        out = [Fraction(0)] * self.rows
        for (r, c), v in self._entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return out

    def kron(self, other: ExactMatrix) -> ExactMatrix:
        """Kronecker product with pair-major indexing ``(i*rows' + i', j*cols' + j')``."""
        entries = {}
        for (i, j), v in self._entries.items():
            for (k, l), w in other._entries.items():
                entries[(i * other.rows + k, j * other.cols + l)] = v * w
        return ExactMatrix(self.rows * other.rows, self.cols * other.cols, entries)

    def block_diag(self, other: ExactMatrix) -> ExactMatrix:
        entries = dict(self._entries)
        for (i, j), v in other._entries.items():
            entries[(i + self.rows, j + self.cols)] = v
        return ExactMatrix(self.rows + other.rows, self.cols + other.cols, entries)

    def inverse(self) -> ExactMatrix:
        """Exact inverse by Gauss-Jordan over Q; raises DomainError if singular."""
        n = self.rows
        if n != self.cols:
            raise ShapeError(f"inverse of non-square {self.shape} matrix")
        a = self.to_rows()
        inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                raise DomainError("matrix is singular")
            a[c], a[piv] = a[piv], a[c]
            inv[c], inv[piv] = inv[piv], inv[c]
            s = a[c][c]
            a[c] = [x / s for x in a[c]]
            inv[c] = [x / s for x in inv[c]]
            for i in range(n):
                f = a[i][c]
                if i != c and f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
                    inv[i] = [x - f * y for x, y in zip(inv[i], inv[c])]
        return ExactMatrix.from_rows(inv)

    def rank(self) -> int:
        return exact_rank(self)


def _integer_rows(m: ExactMatrix) -> list[dict[int, int]]:
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    rows: list[dict[int, int]] = [dict() for _ in range(m.rows)]
    for (r, c), v in m.items():
        rows[r][c] = v
    out = []
    for row in rows:
        if not row:
            continue
        d = lcm(*(v.denominator for v in row.values()))
        out.append({c: int(v * d) for c, v in row.items()})
    return out


def _rank_modular(rows: list[dict[int, int]], ncols: int, p: int) -> int:
    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for c, v in row.items():
            a[i, c] = v % p
    return int(kernels.rank_mod_p(a, p))


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination.

    All intermediate values are exact integers (minors of the input), so
    there is no rounding and no rational blow-up.
    """
    if not rows or not rows[0]:
        return 0
    a = np.array(rows, dtype=object)
    nrows, ncols = a.shape
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = [i for i in range(r, nrows) if a[i, c] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        if r + 1 < nrows:
            p = a[r, c]
            sub = a[r + 1:, c + 1:]
            a[r + 1:, c + 1:] = (p * sub - np.outer(a[r + 1:, c], a[r, c + 1:])) // prev
            a[r + 1:, c] = 0
            prev = p
        r += 1
    return r


def sparse_integer_rank(rows: Sequence[Mapping[int, int]]) -> int:
    """Rank of a sparse integer matrix given as ``{col: value}`` rows.

    Each step pivots on the column with the fewest nonzeros and the sparsest
    row in it, eliminates with integer row operations and divides every
    updated row by its content, so values stay integral and small.
    """
    rows = [dict(r) for r in rows]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    rank = 0
    while col_rows:
        c = min(col_rows, key=lambda k: (len(col_rows[k]), k))
        cand = col_rows[c]
        i = min(cand, key=lambda k: (len(rows[k]), k))
        piv = rows[i]
        pv = piv[c]
        for cc in piv:
            col_rows[cc].discard(i)
        for k in list(cand):
            row = rows[k]
            g = gcd(pv, row[c])
            a, b = pv // g, row[c] // g
            for cc in row:
                col_rows[cc].discard(k)
            new = {cc: a * v for cc, v in row.items()}
            for cc, v in piv.items():
                w = new.get(cc, 0) - b * v
                if w:
                    new[cc] = w
                else:
                    new.pop(cc, None)
            if new:
                content = reduce(gcd, new.values())
                if content > 1:
                    new = {cc: v // content for cc, v in new.items()}
            rows[k] = new
            for cc in new:
                col_rows.setdefault(cc, set()).add(k)
        col_rows = {k: v for k, v in col_rows.items() if v}
        rank += 1
    return rank


DENSE_THRESHOLD = 0.25


def exact_rank(m: ExactMatrix) -> int:
    """Rank of ``m`` over the rationals, exactly."""
    rows = _integer_rows(m)
    if not rows:
        return 0
    full = min(len(rows), m.cols)
    best = 0
    for p in kernels.PRIMES:
        best = max(best, _rank_modular(rows, m.cols, p))
        if best == full:
            return best
    nnz = sum(len(r) for r in rows)
    if nnz < DENSE_THRESHOLD * len(rows) * m.cols:
        return sparse_integer_rank(rows)
    cols = sorted({c for row in rows for c in row})
    index = {c: j for j, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rows]
    for i, row in enumerate(rows):
        for c, v in row.items():
            dense[i][index[c]] = v
    return bareiss_rank(dense)


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014).

    Chosen because the algorithm is a dozen lines of 64-bit integer
    arithmetic, so a seed reproduces the same stream in any language.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` by rejection (no modulo bias)."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            z = self.next_u64()
            if z < limit:
                return lo + z % span


def random_rational_matrix(rows: int, cols: int, seed: int, range: int) -> ExactMatrix:
    """Integer matrix with entries uniform in ``[-range, range]``, drawn row-major."""
    if rows <= 0 or cols <= 0:
        raise ShapeError(f"degenerate shape {rows}x{cols}")
    if range < 0:
        raise DomainError("range must be nonnegative")
    gen = SplitMix64(seed)
    entries = {}
    for i in builtins.range(rows):
        for j in builtins.range(cols):
            entries[(i, j)] = gen.uniform_int(-range, range)
    return ExactMatrix(rows, cols, entries)

