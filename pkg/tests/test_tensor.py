import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_ints, small_rationals, tensors
from omegalab.constructions import cw_tensor, matmul_kron_permutation, matmul_tensor, unit_tensor
from omegalab.errors import DomainError, ShapeError
from omegalab.exact import ExactMatrix, exact_rank, random_rational_matrix
from omegalab.tensor import (
    CubicPoly,
    Tensor3,
    direct_sum,
    flatten,
    koszul_flattening,
    kronecker,
    kronecker_power,
    permute_coordinates,
    symmetrize,
    tensor_equal,
    trilinear_eval,
    zero_tensor,
)
from oracles import brute_trilinear, dense_flatten, dense_tensor


def inversions(seq):
    return sum(1 for x, y in itertools.combinations(seq, 2) if x > y)


def koszul_oracle(t, p, proj):
    """Dense Koszul matrix with wedge signs from inversion counts."""
    a, b, c = t.dims
    dim = 2 * p + 1
    d = dense_tensor(t)
    pm = proj.to_rows()
    tp = [[[sum(pm[x][i] * d[i][j][k] for i in range(a)) for k in range(c)] for j in range(b)] for x in range(dim)]
    lower = list(itertools.combinations(range(dim), p))
    upper = list(itertools.combinations(range(dim), p + 1))
    m = [[Fraction(0)] * (len(lower) * b) for _ in range(len(upper) * c)]
    for si, s in enumerate(lower):
        for j in range(b):
            for x in range(dim):
                if x in s:
                    continue
                word = (x,) + s
                sign = -1 if inversions(word) % 2 else 1
                up = upper.index(tuple(sorted(word)))
                for k in range(c):
                    m[up * c + k][si * b + j] += sign * tp[x][j][k]
    return m


class TestTensor3:
    def test_zero_entries_dropped(self):
        t = Tensor3((2, 2, 2), {(0, 0, 0): 0, (1, 1, 1): Fraction(2, 4)})
        assert t.entries == {(1, 1, 1): Fraction(1, 2)}

    def test_bounds_checked(self):
        with pytest.raises(ShapeError):
            Tensor3((1, 1, 1), {(1, 0, 0): 1})

    def test_equal_self(self):
        t = cw_tensor(2)
        assert tensor_equal(t, t)

    def test_differs_in_one_entry(self):
        t = cw_tensor(2)
        t2 = Tensor3(t.dims, dict(t.items()) | {(0, 0, 0): 1})
        assert not tensor_equal(t, t2)


class TestKronecker:
    def test_unit_one_is_identity(self):
        t = cw_tensor(2)
        assert tensor_equal(kronecker(unit_tensor(1), t), t)

    def test_matmul_identity(self):
        m2 = matmul_tensor(2, 2, 2)
        sq = kronecker(m2, m2)
        assert not tensor_equal(sq, matmul_tensor(4, 4, 4))
        assert tensor_equal(permute_coordinates(sq, *matmul_kron_permutation(2, 2, 2, 2, 2, 2)), matmul_tensor(4, 4, 4))

    def test_cw2_square(self):
        sq = kronecker(cw_tensor(2), cw_tensor(2))
        assert sq.dims == (9, 9, 9) and sq.nnz() == 36

    def test_power_one(self):
        t = cw_tensor(3)
        assert tensor_equal(kronecker_power(t, 1), t)

    def test_power_unit(self):
        t = kronecker_power(unit_tensor(2), 2)
        assert set(t.entries) == {(n, n, n) for n in range(4)}

    def test_power_matches_kronecker(self):
        assert tensor_equal(kronecker_power(cw_tensor(2), 2), kronecker(cw_tensor(2), cw_tensor(2)))

    def test_power_zero(self):
        with pytest.raises(DomainError):
            kronecker_power(cw_tensor(2), 0)

    @given(tensors(max_dim=2, max_nnz=4), tensors(max_dim=2, max_nnz=4), tensors(max_dim=2, max_nnz=4))
    def test_associative(self, t1, t2, t3):
        # pair-major indexing makes the associativity reindexing the identity
        assert tensor_equal(kronecker(kronecker(t1, t2), t3), kronecker(t1, kronecker(t2, t3)))

    @given(tensors(), tensors())
    def test_flatten_is_matrix_kron(self, t1, t2):
        a, b, c = t1.dims
        a2, b2, c2 = t2.dims
        flat = flatten(kronecker(t1, t2), "A")
        mk = flatten(t1, "A").kron(flatten(t2, "A"))
        # matrix-kron column (j*c+k)*(b2*c2) + (j2*c2+k2) is tensor column (j*b2+j2)*(c*c2) + (k*c2+k2)
        perm = {}
        for j, k, j2, k2 in itertools.product(range(b), range(c), range(b2), range(c2)):
            perm[(j * c + k) * (b2 * c2) + (j2 * c2 + k2)] = (j * b2 + j2) * (c * c2) + (k * c2 + k2)
        moved = ExactMatrix(mk.rows, mk.cols, {(r, perm[col]): v for (r, col), v in mk.items()})
        assert moved == flat
        assert exact_rank(flat) == exact_rank(flatten(t1, "A")) * exact_rank(flatten(t2, "A"))


class TestDirectSum:
    def test_units(self):
        assert tensor_equal(direct_sum(unit_tensor(1), unit_tensor(1)), unit_tensor(2))

    def test_zero_summand(self):
        t = cw_tensor(2)
        assert tensor_equal(direct_sum(t, zero_tensor((0, 0, 0))), t)

    def test_rectangular(self):
        # dims add factorwise: (2,2,1) + (1,1,2)
        s = direct_sum(matmul_tensor(1, 1, 2), matmul_tensor(2, 1, 1))
        assert s.dims == (3, 3, 4) and s.nnz() == 4
        assert set(s.entries) == {(0, 0, 0), (0, 1, 1), (1, 2, 2), (2, 2, 3)}

    @given(tensors(), tensors())
    def test_flattening_ranks_add(self, t1, t2):
        s = direct_sum(t1, t2)
        for f in "ABC":
            assert exact_rank(flatten(s, f)) == exact_rank(flatten(t1, f)) + exact_rank(flatten(t2, f))


class TestPermute:
    def test_identity(self):
        t = cw_tensor(2)
        ident = list(range(3))
        assert tensor_equal(permute_coordinates(t, ident, ident, ident), t)

    def test_swap(self):
        t = Tensor3((2, 1, 1), {(0, 0, 0): 1})
        assert permute_coordinates(t, [1, 0], [0], [0]).entries == {(1, 0, 0): 1}

    def test_size_mismatch(self):
        with pytest.raises(ShapeError):
            permute_coordinates(cw_tensor(1), [0, 1, 2], [0, 1], [0, 1])

    @given(tensors(), st.randoms(use_true_random=False))
    def test_inverse(self, t, rnd):
        perms = [rnd.sample(range(d), d) for d in t.dims]
        inv = [[p.index(n) for n in range(len(p))] for p in perms]
        assert tensor_equal(permute_coordinates(permute_coordinates(t, *perms), *inv), t)


class TestFlatten:
    def test_matmul(self):
        f = flatten(matmul_tensor(2, 2, 2), "A")
        assert f.shape == (4, 16) and exact_rank(f) == 4

    @pytest.mark.parametrize("r", [1, 2, 5])
    def test_unit(self, r):
        f = flatten(unit_tensor(r), "A")
        assert f.shape == (r, r * r) and exact_rank(f) == r

    def test_cw2(self):
        f = flatten(cw_tensor(2), "A")
        assert f.shape == (3, 9) and exact_rank(f) == 3

    @given(tensors())
    def test_matches_dense(self, t):
        for f in "ABC":
            assert flatten(t, f).to_rows() == dense_flatten(t, f)


class TestKoszul:
    def test_single_entry(self):
        t = Tensor3((3, 1, 1), {(0, 0, 0): 1})
        k = koszul_flattening(t, 1, ExactMatrix.identity(3))
        assert exact_rank(k) == comb(2, 1) == 2

    def test_m2(self):
        k = koszul_flattening(matmul_tensor(2, 2, 2), 1, random_rational_matrix(3, 4, 0, 5))
        assert k.shape == (12, 12) and exact_rank(k) == 12

    def test_m3(self):
        k = koszul_flattening(matmul_tensor(3, 3, 3), 2, random_rational_matrix(5, 9, 0, 5))
        assert k.shape == (90, 90) and exact_rank(k) == 90

    def test_bad_projection(self):
        with pytest.raises(ShapeError):
            koszul_flattening(matmul_tensor(2, 2, 2), 1, ExactMatrix.identity(4))

    @given(tensors(max_dim=3, max_nnz=6), st.integers(1, 2), st.integers(0, 1000))
    def test_matches_oracle(self, t, p, seed):
        proj = random_rational_matrix(2 * p + 1, t.dims[0], seed, 3)
        assert koszul_flattening(t, p, proj).to_rows() == koszul_oracle(t, p, proj)

    @given(st.integers(1, 2), st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
    def test_rank_one_gives_binomial(self, p, seed, a, b, c):
        rnd = random.Random(seed)

        def vec(n):
            v = [rnd.randint(-3, 3) for _ in range(n)]
            v[rnd.randrange(n)] = rnd.choice([1, 2, -1])
            return v

        u, v, w = vec(a), vec(b), vec(c)
        proj = random_rational_matrix(2 * p + 1, a, seed, 4)
        if not any(proj.apply(u)):
            return
        k = koszul_flattening(Tensor3.rank_one(u, v, w), p, proj)
        assert exact_rank(k) == comb(2 * p, p)

    @given(tensors(max_dim=3, max_nnz=6, dims=(3, 3, 3)), st.integers(1, 2), st.integers(0, 10 ** 6),
           st.lists(small_ints, min_size=9, max_size=9))
    def test_subadditive_under_rank_one(self, t, p, seed, vals):
        proj = random_rational_matrix(2 * p + 1, 3, seed, 4)
        r1 = Tensor3.rank_one(vals[:3], vals[3:6], vals[6:])
        before = exact_rank(koszul_flattening(t, p, proj))
        after = exact_rank(koszul_flattening(t + r1, p, proj))
        assert after <= before + comb(2 * p, p)


class TestTrilinear:
    def test_m2_identity(self):
        ident = [1, 0, 0, 1]
        assert trilinear_eval(matmul_tensor(2, 2, 2), ident, ident, ident) == 2

    def test_unit(self):
        assert trilinear_eval(unit_tensor(3), [1] * 3, [1] * 3, [1] * 3) == 3

    def test_swap_cubed(self):
        x = [0, 1, 1, 0]
        assert trilinear_eval(matmul_tensor(2, 2, 2), x, x, x) == 0

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            trilinear_eval(unit_tensor(2), [1], [1, 1], [1, 1])

    @given(tensors(), st.data())
    def test_matches_brute(self, t, data):
        x, y, z = (data.draw(st.lists(small_rationals, min_size=d, max_size=d)) for d in t.dims)
        assert trilinear_eval(t, x, y, z) == brute_trilinear(t, x, y, z)


class TestSymmetrize:
    def test_unit(self):
        assert symmetrize(unit_tensor(2)) == CubicPoly(2, {(0, 0, 0): 1, (1, 1, 1): 1})

    def test_m2(self):
        expect = CubicPoly(4, {(0, 0, 0): 1, (3, 3, 3): 1, (0, 1, 2): 3, (1, 2, 3): 3})
        assert symmetrize(matmul_tensor(2, 2, 2)) == expect

    def test_cw1(self):
        # cw_tensor(1) lives on two variables: three entries all give x0*x1^2
        assert symmetrize(cw_tensor(1)) == CubicPoly(2, {(0, 1, 1): 3})

    def test_cw2(self):
        # with q=2 the three index positions are distinct only through x0
        assert symmetrize(cw_tensor(2)) == CubicPoly(3, {(0, 1, 1): 3, (0, 2, 2): 3})

    def test_unequal_dims(self):
        with pytest.raises(ShapeError):
            symmetrize(matmul_tensor(1, 1, 2))

    @given(st.integers(1, 4).flatmap(lambda n: tensors(dims=(n, n, n), max_nnz=10)), st.data())
    def test_evaluation_matches_diagonal(self, t, data):
        x = data.draw(st.lists(small_rationals, min_size=t.dims[0], max_size=t.dims[0]))
        assert symmetrize(t).evaluate(x) == trilinear_eval(t, x, x, x)

    def test_200_points(self):
        rnd = random.Random(3)
        for n in range(1, 5):
            t = Tensor3((n, n, n), {(rnd.randrange(n), rnd.randrange(n), rnd.randrange(n)): rnd.randint(-3, 3)
                                    for _ in range(8)})
            poly = symmetrize(t)
            for _ in range(50):
                x = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(n)]
                assert poly.evaluate(x) == trilinear_eval(t, x, x, x)
