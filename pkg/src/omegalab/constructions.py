"""Closed-form tensors and cubics: matrix multiplication, unit and CW tensors."""
from __future__ import annotations

from .errors import DomainError
from .tensor import CubicPoly, Tensor3


def _positive(**kw):
    for name, v in kw.items():
        if int(v) < 1:
            raise DomainError(f"{name} must be >= 1, got {v}")


def matmul_tensor(l: int, m: int, n: int) -> Tensor3:
    """M<l,m,n>, the trilinear form (X, Y, Z) -> trace(XYZ).

    X is l x m, Y is m x n, Z is n x l, each flattened row-major.
    """
    _positive(l=l, m=m, n=n)
    entries = {}
    for i in range(l):
        for j in range(m):
            for k in range(n):
                entries[(i * m + j, j * n + k, k * l + i)] = 1
    return Tensor3((l * m, m * n, n * l), entries)


def unit_tensor(r: int) -> Tensor3:
    _positive(r=r)
    return Tensor3((r, r, r), {(i, i, i): 1 for i in range(r)})


def cw_tensor(q: int) -> Tensor3:
    """Little Coppersmith-Winograd tensor; index 0 is the distinguished vector."""
    _positive(q=q)
    entries = {}
    for j in range(1, q + 1):
        entries[(0, j, j)] = 1
        entries[(j, 0, j)] = 1
        entries[(j, j, 0)] = 1
    return Tensor3((q + 1, q + 1, q + 1), entries)


def big_cw_tensor(q: int) -> Tensor3:
    """Big Coppersmith-Winograd tensor.

    The little tensor on indices 0..q plus the three corner terms
    a_0 b_0 c_{q+1} + a_0 b_{q+1} c_0 + a_{q+1} b_0 c_0, following
    Coppersmith & Winograd, J. Symbolic Comput. 9 (1990).
    """
    _positive(q=q)
    entries = dict(cw_tensor(q).items())
    z = q + 1
    entries[(0, 0, z)] = 1
    entries[(0, z, 0)] = 1
    entries[(z, 0, 0)] = 1
    return Tensor3((q + 2, q + 2, q + 2), entries)


def smat_poly(n: int) -> CubicPoly:
    """trace(X^3) for an n x n matrix of variables, x_ij at index i*n + j."""
    _positive(n=n)
    terms: dict = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                mono = tuple(sorted((i * n + j, j * n + k, k * n + i)))
                terms[mono] = terms.get(mono, 0) + 1
    return CubicPoly(n * n, terms)


def matmul_kron_permutation(l: int, m: int, n: int, l2: int, m2: int, n2: int):
    """Factor permutations carrying M<l,m,n> (x) M<l2,m2,n2> onto M<l l2, m m2, n n2>.

    Each returned list maps an old pair-major index to its new position.
    """
    _positive(l=l, m=m, n=n, l2=l2, m2=m2, n2=n2)

    def regroup(r, s, r2, s2):
        # old index (x*s + y)*(r2*s2) + (x2*s2 + y2) -> (x*r2 + x2)*(s*s2) + (y*s2 + y2)
        perm = [0] * (r * s * r2 * s2)
        for x in range(r):
            for y in range(s):
                for x2 in range(r2):
                    for y2 in range(s2):
                        old = (x * s + y) * (r2 * s2) + (x2 * s2 + y2)
                        perm[old] = (x * r2 + x2) * (s * s2) + (y * s2 + y2)
        return perm

    return regroup(l, m, l2, m2), regroup(m, n, m2, n2), regroup(n, l, n2, l2)
