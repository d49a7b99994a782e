"""Sparse order-3 tensors and cubic polynomials over Q.

Composite indices are row-major everywhere: the A-flattening puts ``T[i,j,k]``
at ``(i, j*c + k)`` and the Kronecker product maps index pairs to
``i*a' + i'``.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ShapeError
from .exact import ExactMatrix, to_scalar

FACTORS = ("A", "B", "C")

Index3 = tuple[int, int, int]


class Tensor3:
    """Element of A (x) B (x) C stored as a sorted map of nonzero entries."""

    __slots__ = ("dims", "_entries")

    def __init__(self, dims: Sequence[int], entries: Mapping[Index3, object] | None = None):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or min(dims) < 0:
            raise ShapeError(f"bad tensor dims {dims}")
        self.dims: tuple[int, int, int] = dims  # type: ignore[assignment]
        clean = {}
        for idx, v in (entries or {}).items():
            idx = tuple(idx)
            if len(idx) != 3 or not all(0 <= x < d for x, d in zip(idx, dims)):
                raise ShapeError(f"index {idx} outside dims {dims}")
            v = to_scalar(v)
            if v:
                clean[idx] = v
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def _trusted(cls, dims, entries: dict) -> Tensor3:
        # entries already canonical apart from ordering and zeros
        t = cls.__new__(cls)
        t.dims = tuple(dims)
        t._entries = dict(sorted((k, v) for k, v in entries.items() if v))
        return t

    @classmethod
    def rank_one(cls, a: Sequence, b: Sequence, c: Sequence, coeff=1) -> Tensor3:
        coeff = to_scalar(coeff)
        a, b, c = ([to_scalar(x) for x in v] for v in (a, b, c))
        entries = {}
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, z in enumerate(c):
                    if z:
                        entries[(i, j, k)] = coeff * x * y * z
        return cls._trusted((len(a), len(b), len(c)), entries)

    @property
    def entries(self) -> dict[Index3, Fraction]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, idx: Index3) -> Fraction:
        return self._entries.get(tuple(idx), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return tensor_equal(self, other)

    def __hash__(self):
        return hash((self.dims, tuple(self._entries.items())))

    def __repr__(self):
        return f"Tensor3(dims={self.dims}, nnz={len(self._entries)})"

    def _check_same_dims(self, other: Tensor3):
        if self.dims != other.dims:
            raise ShapeError(f"dims {self.dims} vs {other.dims}")

    def __add__(self, other: Tensor3) -> Tensor3:
        self._check_same_dims(other)
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = acc.get(k, 0) + v
        return Tensor3._trusted(self.dims, acc)

    def __neg__(self) -> Tensor3:
        return Tensor3._trusted(self.dims, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: Tensor3) -> Tensor3:
        return self + (-other)

    def scale(self, s) -> Tensor3:
        s = to_scalar(s)
        return Tensor3._trusted(self.dims, {k: s * v for k, v in self._entries.items()})

    def cyclic_shift(self, shift: int = 1) -> Tensor3:
        """Relabel factors so that factor ``shift`` (mod 3) becomes A."""
        s = shift % 3
        order = [(s + t) % 3 for t in range(3)]
        return Tensor3._trusted(
            tuple(self.dims[o] for o in order),
            {tuple(idx[o] for o in order): v for idx, v in self._entries.items()},
        )


def zero_tensor(dims: Sequence[int]) -> Tensor3:
    return Tensor3(dims)


def tensor_equal(t: Tensor3, t2: Tensor3) -> bool:
    return t.dims == t2.dims and t._entries == t2._entries


def kronecker(t: Tensor3, t2: Tensor3) -> Tensor3:
    """T (x) T' regrouped as a 3-way tensor, pair-major in each factor."""
    a2, b2, c2 = t2.dims
    entries = {}
    for (i, j, k), v in t.items():
        for (i2, j2, k2), w in t2.items():
            entries[(i * a2 + i2, j * b2 + j2, k * c2 + k2)] = v * w
    a, b, c = t.dims
    return Tensor3._trusted((a * a2, b * b2, c * c2), entries)


def kronecker_power(t: Tensor3, k: int) -> Tensor3:
    if k < 1:
        raise DomainError("Kronecker power needs k >= 1")
    out = t
    for _ in range(k - 1):
        out = kronecker(out, t)
    return out


def direct_sum(t: Tensor3, t2: Tensor3) -> Tensor3:
    a, b, c = t.dims
    entries = dict(t.items())
    for (i, j, k), v in t2.items():
        entries[(i + a, j + b, k + c)] = v
    return Tensor3._trusted(tuple(x + y for x, y in zip(t.dims, t2.dims)), entries)


def _check_perm(perm: Sequence[int], n: int, name: str):
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ShapeError(f"{name} is not a permutation of size {n}")


def permute_coordinates(t: Tensor3, pA: Sequence[int], pB: Sequence[int], pC: Sequence[int]) -> Tensor3:
    """Move the entry at ``(i, j, k)`` to ``(pA[i], pB[j], pC[k])``."""
    for p, n, name in zip((pA, pB, pC), t.dims, FACTORS):
        _check_perm(p, n, f"permutation for factor {name}")
    return Tensor3._trusted(t.dims, {(pA[i], pB[j], pC[k]): v for (i, j, k), v in t.items()})


def _factor_index(factor) -> int:
    if isinstance(factor, int) and 0 <= factor < 3:
        return factor
    try:
        return FACTORS.index(str(factor).upper())
    except ValueError:
        raise ShapeError(f"unknown factor {factor!r}") from None


def flatten(t: Tensor3, factor="A") -> ExactMatrix:
    """Flattening with the chosen factor as rows; remaining factors row-major."""
    a, b, c = t.dims
    f = _factor_index(factor)
    if f == 0:
        return ExactMatrix(a, b * c, {(i, j * c + k): v for (i, j, k), v in t.items()})
    if f == 1:
        return ExactMatrix(b, a * c, {(j, i * c + k): v for (i, j, k), v in t.items()})
    return ExactMatrix(c, a * b, {(k, i * b + j): v for (i, j, k), v in t.items()})


def koszul_flattening(t: Tensor3, p: int, projection: ExactMatrix) -> ExactMatrix:
    """Koszul flattening  L^p A'' (x) B* -> L^(p+1) A'' (x) C  of the projected tensor.

    ``A''`` is the image of ``projection`` (shape ``(2p+1) x a``).  Columns are
    indexed by ``(p-subset, j)``, rows by ``((p+1)-subset, k)``, subsets in
    lexicographic order.  Wedging ``e_s`` onto a sorted subset carries the
    sign ``(-1)^#{elements < s}``.
    """
    if p < 1:
        raise DomainError("Koszul flattening needs p >= 1")
    a, b, c = t.dims
    dim = 2 * p + 1
    if projection.shape != (dim, a):
        raise ShapeError(f"projection must be {dim}x{a}, got {projection.rows}x{projection.cols}")
    lower = list(combinations(range(dim), p))
    upper = list(combinations(range(dim), p + 1))
    upper_pos = {s: n for n, s in enumerate(upper)}

    proj_cols: dict[int, list[tuple[int, Fraction]]] = {}
    for (r, col), v in projection.items():
        proj_cols.setdefault(col, []).append((r, v))

    # wedge[s_idx][x] = (row subset index, sign) for every x not in subset
    wedge = []
    for s in lower:
        table = {}
        for x in range(dim):
            if x in s:
                continue
            below = sum(1 for y in s if y < x)
            table[x] = (upper_pos[tuple(sorted(s + (x,)))], -1 if below % 2 else 1)
        wedge.append(table)

    acc: dict[tuple[int, int], Fraction] = {}
    for (i, j, k), v in t.items():
        for x, u in proj_cols.get(i, ()):
            w = v * u
            for s_idx, table in enumerate(wedge):
                hit = table.get(x)
                if hit is None:
                    continue
                up, sign = hit
                key = (up * c + k, s_idx * b + j)
                acc[key] = acc.get(key, 0) + (w if sign > 0 else -w)
    return ExactMatrix(len(upper) * c, len(lower) * b, acc)


def koszul_shape(dims: Sequence[int], p: int) -> tuple[int, int]:
    """Shape of the Koszul flattening for a tensor of the given dims."""
    _, b, c = dims
    return comb(2 * p + 1, p + 1) * c, comb(2 * p + 1, p) * b


def trilinear_eval(t: Tensor3, x: Sequence, y: Sequence, z: Sequence) -> Fraction:
    if (len(x), len(y), len(z)) != t.dims:
        raise ShapeError(f"vector lengths {(len(x), len(y), len(z))} vs dims {t.dims}")
    x, y, z = ([to_scalar(e) for e in v] for v in (x, y, z))
    total = Fraction(0)
    for (i, j, k), v in t.items():
        total += v * x[i] * y[j] * z[k]
    return total


Monomial = tuple[int, int, int]


class CubicPoly:
    """Homogeneous cubic in ``nvars`` variables; monomials are sorted variable triples."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 0:
            raise ShapeError("negative number of variables")
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        for mono, v in (terms or {}).items():
            mono = tuple(sorted(mono))
            if len(mono) != 3 or not all(0 <= x < nvars for x in mono):
                raise ShapeError(f"monomial {mono} is not a cubic in {nvars} variables")
            clean[mono] = clean.get(mono, 0) + to_scalar(v)
        self._terms = dict(sorted((m, v) for m, v in clean.items() if v))

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, CubicPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def __repr__(self):
        return f"CubicPoly(nvars={self.nvars}, terms={len(self._terms)})"

    def __add__(self, other: CubicPoly) -> CubicPoly:
        if self.nvars != other.nvars:
            raise ShapeError(f"{self.nvars} vs {other.nvars} variables")
        acc = dict(self._terms)
        for m, v in other._terms.items():
            acc[m] = acc.get(m, 0) + v
        return CubicPoly(self.nvars, acc)

    def __neg__(self) -> CubicPoly:
        return CubicPoly(self.nvars, {m: -v for m, v in self._terms.items()})

    def __sub__(self, other: CubicPoly) -> CubicPoly:
        return self + (-other)

    def scale(self, s) -> CubicPoly:
        s = to_scalar(s)
        return CubicPoly(self.nvars, {m: s * v for m, v in self._terms.items()})

    def evaluate(self, x: Sequence) -> Fraction:
        if len(x) != self.nvars:
            raise ShapeError(f"point of length {len(x)} for {self.nvars} variables")
        x = [to_scalar(e) for e in x]
        return sum((v * x[i] * x[j] * x[k] for (i, j, k), v in self._terms.items()), Fraction(0))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, v in self._terms.items():
            powers = Counter(mono)
            factors = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in sorted(powers.items()))
            parts.append(f"{v}*{factors}")
        return " + ".join(parts)


def cube_of_linear_form(form: Sequence, coeff=1) -> CubicPoly:
    """Expand ``coeff * (sum_i form[i] x_i)^3`` by the multinomial theorem."""
    form = [to_scalar(v) for v in form]
    coeff = to_scalar(coeff)
    support = [i for i, v in enumerate(form) if v]
    terms = {}
    for i_pos, i in enumerate(support):
        for j_pos in range(i_pos, len(support)):
            j = support[j_pos]
            for k in support[j_pos:]:
                mono = (i, j, k)
                mult = 6
                for e in Counter(mono).values():
                    mult //= factorial(e)
                terms[mono] = coeff * mult * form[i] * form[j] * form[k]
    return CubicPoly(len(form), terms)


def symmetrize(t: Tensor3) -> CubicPoly:
    """The cubic ``x -> T(x, x, x)`` of a tensor with identified factors."""
    a, b, c = t.dims
    if not a == b == c:
        raise ShapeError(f"symmetrize needs equal dims, got {t.dims}")
    # the constructor sorts each index triple and merges permuted duplicates
    return CubicPoly(a, dict(t.items()))


def sum_tensors(tensors: Iterable[Tensor3], dims: Sequence[int]) -> Tensor3:
    acc: dict[Index3, Fraction] = {}
    for t in tensors:
        if t.dims != tuple(dims):
            raise ShapeError(f"dims {t.dims} vs {tuple(dims)}")
        for k, v in t.items():
            acc[k] = acc.get(k, 0) + v
    return Tensor3._trusted(tuple(dims), acc)
