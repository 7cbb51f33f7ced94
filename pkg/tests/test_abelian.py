import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from trideriv.abelian import (
    DimensionError,
    FgAbelianGroup,
    GroupMismatchError,
    IntMatrix,
    quotient_group,
    smith_normal_form,
)


def determinantal_divisors(m):
    """gcd of all k x k minors, k = 1..rank; an oracle independent of any
    elimination order."""
    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                sub = IntMatrix.from_rows([[m[r, c] for c in cols] for r in rows])
                g = gcd(g, sub.det())
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(m):
    dd = determinantal_divisors(m)
    return [dd[0]] + [dd[k] // dd[k - 1] for k in range(1, len(dd))] if dd else []


def check_snf(m):
    r = smith_normal_form(m)
    assert abs(r.u.det()) == 1 and abs(r.v.det()) == 1
    assert r.u @ m @ r.v == r.d
    diag = r.diagonal
    for i in range(r.d.rows):
        for j in range(r.d.cols):
            if i != j:
                assert r.d[i, j] == 0
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    return r


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


class TestIntMatrix:
    def test_det_and_inverse(self):
        m = IntMatrix.from_rows([[2, 1], [1, 1]])
        assert m.det() == 1
        assert m @ m.inverse() == IntMatrix.identity(2)

    def test_inverse_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[2, 0], [0, 1]]).inverse()

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            IntMatrix.from_rows([[1, 2]]) @ IntMatrix.from_rows([[1, 2]])

    def test_transpose(self):
        m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.transpose().tolist() == [[1, 4], [2, 5], [3, 6]]


class TestSmithNormalForm:
    @pytest.mark.parametrize("rows, diag", [
        ([[-1, -3, 3, 0], [-1, -3, 0, 2]], (1, 1)),
        ([[-1, -1, 1, 1, 0], [-1, -1, 0, 0, 2]], (1, 1)),
        ([[-2, 2, 0], [-2, 0, 2]], (2, 2)),
        ([[0, 0], [0, 0]], (0, 0)),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
    ])
    def test_examples(self, rows, diag):
        r = check_snf(IntMatrix.from_rows(rows))
        assert r.diagonal == diag

    @settings(max_examples=200, deadline=None)
    @given(matrices)
    def test_invariants_and_oracle(self, rows):
        m = IntMatrix.from_rows(rows)
        r = check_snf(m)
        nonzero = [x for x in r.diagonal if x]
        assert nonzero == invariant_factors(m)

    def test_deterministic(self):
        m = IntMatrix.from_rows([[3, 5, 7], [2, 4, 6]])
        assert smith_normal_form(m) == smith_normal_form(m)

    def test_large_entries(self):
        big = 10 ** 30
        m = IntMatrix.from_rows([[big, big + 1], [big - 1, big]])
        r = check_snf(m)
        assert r.diagonal == (1, 1)


class TestGroup:
    def test_validation(self):
        with pytest.raises(ValueError):
            FgAbelianGroup(1, (2, 3))
        with pytest.raises(ValueError):
            FgAbelianGroup(1, (1,))
        FgAbelianGroup(0, (2, 4))

    def test_describe(self):
        assert FgAbelianGroup(2, ()).describe() == "Z^2"
        assert FgAbelianGroup(1, (2, 2)).describe() == "Z + Z_2 + Z_2"

    def test_element_arithmetic(self):
        g = FgAbelianGroup(1, (2,))
        a, b = g.element([1, 1]), g.element([2, 1])
        assert (a + b).coords == (3, 0)
        assert (a - a).is_identity
        assert (a * 2).coords == (2, 0)
        assert -a == g.element([-1, 1])
        assert a.free_part() == (1,)

    def test_mismatch(self):
        a = FgAbelianGroup(1, ()).element([1])
        b = FgAbelianGroup(2, ()).element([1, 0])
        with pytest.raises(GroupMismatchError):
            a + b


class TestQuotient:
    @pytest.mark.parametrize("l_rows, free, tors", [
        ([[-1, -3, 3, 0], [-1, -3, 0, 2]], 2, ()),
        ([[-1, -1, 1, 1, 0], [-1, -1, 0, 0, 2]], 3, ()),
        ([[-2, 2, 0], [-2, 0, 2]], 1, (2, 2)),
    ])
    def test_examples(self, l_rows, free, tors):
        group, proj = quotient_group(IntMatrix.from_rows(l_rows).transpose())
        assert (group.free_rank, group.torsion_orders) == (free, tors)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 3), st.randoms(use_true_random=False))
    def test_relations_vanish_and_surjective(self, n_extra, k, rnd):
        n = k + n_extra
        cols = [[rnd.randint(-5, 5) for _ in range(n)] for _ in range(k)]
        rel = IntMatrix.from_rows([[c[i] for c in cols] for i in range(n)], k) if k else IntMatrix.zeros(n, 1)
        group, proj = quotient_group(rel)
        for j in range(rel.cols):
            assert proj(rel.column(j)).is_identity
        for idx, pre in enumerate(proj.preimages):
            assert proj(pre) == group.generators()[idx]

    def test_permutation_invariance(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(2, 5)
            rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(2)]
            perm = list(range(n))
            rng.shuffle(perm)
            g1, _ = quotient_group(IntMatrix.from_rows(rows).transpose())
            g2, _ = quotient_group(IntMatrix.from_rows([[r[p] for p in perm] for r in rows]).transpose())
            assert g1 == g2
