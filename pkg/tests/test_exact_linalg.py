from fractions import Fraction as Fr
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simpsec import exact_linalg as la

small = st.integers(-6, 6)


def matrices(max_m=4, max_n=4):
    return st.integers(1, max_m).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_snf_factorization(M):
    snf = la.smith_normal_form(M)
    assert la.matmul(la.matmul(snf.U, M), snf.V) == snf.S
    assert la.matmul(snf.U, snf.U_inv) == la.identity(len(M))
    assert la.matmul(snf.V, snf.V_inv) == la.identity(len(M[0]))
    d = [x for x in snf.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    for i, row in enumerate(snf.S):
        for j, v in enumerate(row):
            assert i == j or v == 0


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_rank_matches_numpy(M):
    assert la.smith_normal_form(M).rank == np.linalg.matrix_rank(np.array(M, dtype=float))


def test_cokernel_small():
    assert str(la.cokernel([[2, 0], [0, 3]])) == "Z/6"
    assert str(la.cokernel([[2], [0]])) == "Z + Z/2"
    assert la.cokernel([[1, 0], [0, 1]]).is_trivial()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_integer_roundtrip(M, x):
    x = x[:len(M[0])]
    b = la.matvec(M, x)
    y = la.solve_integer(M, b)
    assert y is not None and la.matvec(M, y) == b
    assert all(Fr(v).denominator == 1 for v in y)


def test_solve_integer_detects_obstruction():
    assert la.solve_integer([[2]], [1]) is None
    assert la.solve_rational([[2]], [1]) == [Fr(1, 2)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_and_kernel(M):
    n = len(M[0])
    for v in la.nullspace(M, n):
        assert la.is_zero_vector(la.matvec(M, v))
    K = la.integer_kernel(M, n)
    assert len(K) == n - la.rank(M)
    for v in K:
        assert la.is_zero_vector(la.matvec(M, v))


def test_mixed_subgroup_membership():
    S = la.MixedSubgroup(2, [[2, 0]], [[0, 1]])
    assert S.contains([4, Fr(1, 3)])
    assert not S.contains([1, 0])
    assert S.contains_line([0, 5]) and not S.contains_line([1, 0])
    k, mu = S.solve([6, Fr(5, 7)])
    assert k == [3] and mu == [Fr(5, 7)]


def test_mixed_quotient_circle_and_torsion():
    # Q / Z is the circle summand; Z / 2Z is torsion
    cyc = la.MixedBasis(2, [[0, 1]], [[1, 0]])
    bnd = la.MixedSubgroup(2, [[1, 0], [0, 2]], [])
    Q = la.mixed_quotient(cyc, bnd)
    assert (Q.group.torsion, Q.group.circle_rank) == ([2], 1)
    assert Q.order([Fr(1, 3), 0]) == 3
    assert Q.order([0, 1]) == 2
    assert Q.is_zero([5, 4])


def test_mixed_kernel_kinds():
    B = la.mixed_kernel([[1, -1]], [True, False])
    assert B.size == 1
    v = (B.int_basis + B.rat_basis)[0]
    assert v[0] == v[1]


def test_mixed_subgroup_basis_is_reduced():
    S = la.MixedSubgroup(2, [[2, 0], [4, 0], [0, 3], [2, 3]], [])
    B = S.basis()
    assert len(B.int_basis) == 2 and not B.rat_basis
    assert B.as_subgroup().contains_subgroup(S) and S.contains_subgroup(B.as_subgroup())


def test_quotient_of_space():
    g = la.quotient_of_space(2, la.MixedSubgroup(2, [[1, 0]], [[0, 1]]))
    assert (g.free_rank, g.rational_rank, g.circle_rank) == (0, 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5))
def test_scale_to_integers(vals):
    A = [[Fr(v, 1 + abs(v) % 4) for v in vals]]
    B, c = la.scale_to_integers(A)
    assert all(Fr(x).denominator == 1 for x in B[0])
    assert [Fr(b, c) for b in B[0]] == A[0]


def test_dimension_errors():
    with pytest.raises(la.DimensionError):
        la.MixedSubgroup(2, [[1, 0]]).solve([1, 2, 3])
