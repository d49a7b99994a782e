"""Rank and Waring decompositions, the GL x GL x GL action and orbit expansion."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DivergenceError, PreconditionError, ShapeError
from .exact import ExactMatrix, exact_rank, to_scalar
from .tensor import CubicPoly, Tensor3, cube_of_linear_form, sum_tensors

Vector = tuple[Fraction, ...]


def _vec(v) -> Vector:
    return tuple(to_scalar(x) for x in v)


@dataclass(frozen=True, order=True)
class RankOneTerm:
    """``coeff * a (x) b (x) c``."""

    a: Vector
    b: Vector
    c: Vector
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", _vec(self.a))
        object.__setattr__(self, "b", _vec(self.b))
        object.__setattr__(self, "c", _vec(self.c))
        object.__setattr__(self, "coeff", to_scalar(self.coeff))

    @property
    def dims(self) -> tuple[int, int, int]:
        return (len(self.a), len(self.b), len(self.c))

    def is_zero(self) -> bool:
        return not (self.coeff and any(self.a) and any(self.b) and any(self.c))

    def to_tensor(self) -> Tensor3:
        return Tensor3.rank_one(self.a, self.b, self.c, self.coeff)

    def canonical(self) -> RankOneTerm:
        """Rescale each vector to have first nonzero entry 1; all scale goes to coeff."""
        coeff = self.coeff
        vecs = []
        for v in (self.a, self.b, self.c):
            lead = next(x for x in v if x)
            coeff *= lead
            vecs.append(tuple(x / lead for x in v))
        return RankOneTerm(*vecs, coeff)


@dataclass
class RankDecomposition:
    dims: tuple[int, int, int]
    terms: list[RankOneTerm] = field(default_factory=list)

    def __post_init__(self):
        self.dims = tuple(self.dims)
        for t in self.terms:
            if t.dims != self.dims:
                raise ShapeError(f"term dims {t.dims} vs decomposition dims {self.dims}")
            if t.is_zero():
                raise PreconditionError("decomposition contains a zero term")

    def __len__(self):
        return len(self.terms)

    def to_tensor(self) -> Tensor3:
        return sum_tensors((t.to_tensor() for t in self.terms), self.dims)

    def canonical_multiset(self) -> Counter:
        return Counter(t.canonical() for t in self.terms)


@dataclass(frozen=True)
class WaringTerm:
    """``coeff * (form . x)^3``."""

    form: Vector
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "form", _vec(self.form))
        object.__setattr__(self, "coeff", to_scalar(self.coeff))


@dataclass
class WaringDecomposition:
    nvars: int
    terms: list[WaringTerm] = field(default_factory=list)

    def __post_init__(self):
        for t in self.terms:
            if len(t.form) != self.nvars:
                raise ShapeError(f"linear form of length {len(t.form)} for {self.nvars} variables")
            if not any(t.form) or not t.coeff:
                raise PreconditionError("Waring decomposition contains a zero term")

    def __len__(self):
        return len(self.terms)

    def to_poly(self) -> CubicPoly:
        out = CubicPoly(self.nvars)
        for t in self.terms:
            out = out + cube_of_linear_form(t.form, t.coeff)
        return out


@dataclass
class VerificationReport:
    passed: bool
    term_count: int
    difference: Tensor3 | CubicPoly | None = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def verify_rank_decomposition(t: Tensor3, d: RankDecomposition) -> VerificationReport:
    if t.dims != d.dims:
        raise ShapeError(f"tensor dims {t.dims} vs decomposition dims {d.dims}")
    diff = d.to_tensor() - t
    ok = diff.nnz() == 0
    return VerificationReport(ok, len(d), None if ok else diff)


def verify_waring_decomposition(p: CubicPoly, w: WaringDecomposition) -> VerificationReport:
    if p.nvars != w.nvars:
        raise ShapeError(f"polynomial has {p.nvars} variables, decomposition {w.nvars}")
    diff = w.to_poly() - p
    ok = len(diff) == 0
    return VerificationReport(ok, len(w), None if ok else diff)


# ---------------------------------------------------------------------------
# group action
# ---------------------------------------------------------------------------


class GroupElement:
    """Element of (GL(A) x GL(B) x GL(C)) extended by factor permutations.

    ``factor_perm[t] = s`` means factor ``s`` of the input becomes factor
    ``t``; the matrices then act on the already permuted factors.
    """

    __slots__ = ("factor_perm", "mats")

    def __init__(self, factor_perm: Sequence[int], mats: Sequence[ExactMatrix]):
        factor_perm = tuple(int(s) for s in factor_perm)
        if sorted(factor_perm) != [0, 1, 2]:
            raise ShapeError(f"factor_perm {factor_perm} is not a permutation of (0, 1, 2)")
        if len(mats) != 3:
            raise ShapeError("a group element needs three matrices")
        for m in mats:
            if m.rows != m.cols:
                raise ShapeError(f"non-square matrix {m.shape} in group element")
            if exact_rank(m) != m.rows:
                raise PreconditionError("group element matrix is not invertible")
        self.factor_perm = factor_perm
        self.mats = tuple(mats)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> GroupElement:
        return cls((0, 1, 2), [ExactMatrix.identity(d) for d in dims])

    @classmethod
    def factor_permutation(cls, factor_perm: Sequence[int], dims: Sequence[int]) -> GroupElement:
        """Pure relabeling of factors for a tensor of the given (input) dims."""
        return cls(factor_perm, [ExactMatrix.identity(dims[s]) for s in factor_perm])

    def input_dims(self) -> tuple[int, int, int]:
        dims = [0, 0, 0]
        for t, s in enumerate(self.factor_perm):
            dims[s] = self.mats[t].rows
        return tuple(dims)

    def _check(self, dims: Sequence[int]):
        if tuple(dims) != self.input_dims():
            raise ShapeError(f"group element acts on dims {self.input_dims()}, not {tuple(dims)}")

    def compose(self, h: GroupElement) -> GroupElement:
        """``self . h``: apply ``h`` first, then ``self``."""
        perm = tuple(h.factor_perm[s] for s in self.factor_perm)
        mats = [self.mats[t] @ h.mats[self.factor_perm[t]] for t in range(3)]
        return GroupElement(perm, mats)

    def inverse(self) -> GroupElement:
        inv_perm = [0, 0, 0]
        for t, s in enumerate(self.factor_perm):
            inv_perm[s] = t
        return GroupElement(inv_perm, [self.mats[inv_perm[t]].inverse() for t in range(3)])

    def apply_term(self, term: RankOneTerm) -> RankOneTerm:
        self._check(term.dims)
        vecs = (term.a, term.b, term.c)
        moved = [self.mats[t].apply(vecs[s]) for t, s in enumerate(self.factor_perm)]
        return RankOneTerm(*moved, term.coeff)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.factor_perm == other.factor_perm and self.mats == other.mats

    def __hash__(self):
        return hash((self.factor_perm, self.mats))

    def __repr__(self):
        return f"GroupElement(factor_perm={self.factor_perm}, dims={self.input_dims()})"


def apply_group_element(g: GroupElement, t: Tensor3) -> Tensor3:
    g._check(t.dims)
    perm = g.factor_perm
    columns = []
    for m in g.mats:
        cols: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in m.items():
            cols.setdefault(c, []).append((r, v))
        columns.append(cols)
    ca, cb, cc = columns
    acc: dict[tuple[int, int, int], Fraction] = {}
    for idx, v in t.items():
        i, j, k = (idx[s] for s in perm)
        for x, u in ca.get(i, ()):
            vu = v * u
            for y, w in cb.get(j, ()):
                vuw = vu * w
                for z, s in cc.get(k, ()):
                    key = (x, y, z)
                    acc[key] = acc.get(key, 0) + vuw * s
    return Tensor3(tuple(m.rows for m in g.mats), acc)


def is_symmetry(g: GroupElement, t: Tensor3) -> bool:
    return apply_group_element(g, t) == t


def orbit_expand_terms(seeds: Sequence[RankOneTerm], generators: Sequence[GroupElement], orbit_cap: int = 720) -> list[RankOneTerm]:
    """Closure of the canonicalized seeds under the generators, canonically sorted."""
    seen = {s.canonical() for s in seeds}
    frontier = sorted(seen)
    while frontier:
        nxt = []
        for term in frontier:
            for g in generators:
                img = g.apply_term(term).canonical()
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > orbit_cap:
                        raise DivergenceError(f"orbit exceeds cap of {orbit_cap} terms")
        frontier = nxt
    return sorted(seen)


@dataclass
class OrbitDecomposition:
    dims: tuple[int, int, int]
    fixed_terms: list[RankOneTerm] = field(default_factory=list)
    seed_terms: list[RankOneTerm] = field(default_factory=list)
    generators: list[GroupElement] = field(default_factory=list)
    orbit_cap: int = 720

    def __post_init__(self):
        self.dims = tuple(self.dims)
        for t in list(self.fixed_terms) + list(self.seed_terms):
            if t.dims != self.dims:
                raise ShapeError(f"term dims {t.dims} vs decomposition dims {self.dims}")
        for g in self.generators:
            g._check(self.dims)


def orbit_expand(o: OrbitDecomposition) -> RankDecomposition:
    orbit = orbit_expand_terms(o.seed_terms, o.generators, o.orbit_cap)
    return RankDecomposition(o.dims, list(o.fixed_terms) + orbit)


def stabilizer_check(g: GroupElement, t: Tensor3, d: RankDecomposition) -> bool:
    """Whether ``g`` (a symmetry of ``t``) permutes the terms of ``d``."""
    if not is_symmetry(g, t):
        raise PreconditionError("group element is not a symmetry of the tensor")
    before = d.canonical_multiset()
    after = Counter(g.apply_term(term).canonical() for term in d.terms)
    return before == after


def naive_decomposition(l: int, m: int, n: int) -> RankDecomposition:
    """The l*m*n-term decomposition of M<l,m,n>, one term per (i, j, k)."""

    def unit(size, pos):
        v = [0] * size
        v[pos] = 1
        return v

    terms = []
    for i in range(l):
        for j in range(m):
            for k in range(n):
                terms.append(RankOneTerm(unit(l * m, i * m + j), unit(m * n, j * n + k), unit(n * l, k * l + i)))
    return RankDecomposition((l * m, m * n, n * l), terms)
