import random
from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pfcond.campaign import rand_skew
from pfcond.matrix import Matrix, SkewMatrix, det_exact, new_skew
from pfcond.pfaffian import (
    cayley_residual, iter_partitions, perm_sign, pf_definition, pf_delete, pf_eliminate, pf_minor, s_sign,
)


@st.composite
def skew_matrices(draw, sizes=(0, 1, 2, 3, 4, 5, 6, 7, 8)):
    n = draw(st.sampled_from(sizes))
    entries = draw(st.lists(st.fractions(min_value=-12, max_value=12, max_denominator=5),
                            min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    it = iter(entries)
    return new_skew(n, [(i, j, next(it)) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def double_factorial(m):
    return prod(range(m, 0, -2)) if m > 0 else 1


def test_conventions():
    assert pf_eliminate(SkewMatrix._trusted((), 0)) == 1
    assert pf_definition(SkewMatrix._trusted((), 0)) == 1
    assert pf_eliminate(new_skew(3, [(1, 2, 1), (2, 3, 5)])) == 0
    assert pf_eliminate(new_skew(2, [(1, 2, 3)])) == 3


def test_four_by_four_closed_form(rng):
    for _ in range(50):
        a = {(i, j): Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for i in range(1, 5) for j in range(i + 1, 5)}
        A = new_skew(4, [(i, j, v) for (i, j), v in a.items()])
        expect = a[1, 2] * a[3, 4] - a[1, 3] * a[2, 4] + a[1, 4] * a[2, 3]
        assert pf_eliminate(A) == expect == pf_definition(A)


def test_pivoting_on_zero_leading_entries():
    A = new_skew(4, [(1, 3, 2), (2, 4, 5)])
    assert pf_eliminate(A) == -10
    assert pf_eliminate(new_skew(4, [(1, 2, 1), (1, 3, 1), (1, 4, 1)])) == 0


@settings(max_examples=150, deadline=None)
@given(skew_matrices())
def test_elimination_matches_definition(A):
    assert pf_eliminate(A) == pf_definition(A)


@settings(max_examples=80, deadline=None)
@given(skew_matrices(sizes=(2, 4, 6, 8)))
def test_square_equals_sympy_determinant(A):
    assert pf_eliminate(A) ** 2 == sympy.Matrix([list(r) for r in A.rows]).det()


@settings(max_examples=60, deadline=None)
@given(skew_matrices(sizes=(2, 4, 6)), st.data())
def test_congruence_rule(A, data):
    # Pf(B A B^T) = det(B) Pf(A)
    n = A.n
    B = Matrix([[data.draw(st.integers(-4, 4)) for _ in range(n)] for _ in range(n)])
    C = B @ A @ B.transpose()
    assert pf_eliminate(SkewMatrix(C.rows)) == det_exact(B) * pf_eliminate(A)


def test_scaling(rng):
    for n in (2, 4, 6):
        A = rand_skew(rng, n, 9)
        c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert pf_eliminate(SkewMatrix(A.scale(c).rows)) == c ** (n // 2) * pf_eliminate(A)


def test_definition_guard():
    with pytest.raises(ValueError):
        pf_definition(rand_skew(random.Random(0), 14, 3))


def test_perm_sign():
    assert perm_sign([1, 2, 3]) == 1
    assert perm_sign([2, 1, 3]) == -1
    assert perm_sign([2, 3, 1]) == 1
    assert perm_sign([1, 1, 3]) == 0
    with pytest.raises(ValueError):
        perm_sign([1, 4, 2])


def test_s_sign():
    assert s_sign([1, 2, 3, 4], [1, 2]) == 1
    assert s_sign([1, 2, 3, 4], [2, 1]) == -1
    assert s_sign([1, 2, 3, 4], [1, 3]) == -1
    assert s_sign([1, 2, 3, 4], [3, 4]) == 1
    assert s_sign([1, 2, 3, 4], [1, 1]) == 0
    assert s_sign([1, 2, 3, 4], [5]) == 0
    assert s_sign([1, 1, 2], [1]) == 0


def test_pair_sign_formula():
    # s([n], xy) for x < y is (-1)^(x+y+1), and the order matters
    for n in range(2, 9):
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                if x == y:
                    continue
                expect = (-1) ** (x + y + 1) * (1 if x < y else -1)
                assert s_sign(range(1, n + 1), (x, y)) == expect


def test_partitions_counted_and_signed():
    for n in range(0, 9, 2):
        parts = list(iter_partitions(n))
        assert len(parts) == double_factorial(n - 1)
        assert len(set(parts)) == len(parts)
    assert list(iter_partitions(3)) == []
    rng = random.Random(5)
    for n in (2, 4, 6):
        A = rand_skew(rng, n, 9)
        brute = sum(
            perm_sign([x for pair in part for x in pair], n) * prod(A[s, t] for s, t in part)
            for part in iter_partitions(n)
        )
        assert brute == pf_definition(A)


def test_minor_semantics(rng):
    A = rand_skew(rng, 6, 9)
    assert pf_minor(A, [2, 5]) == A[2, 5]
    assert pf_minor(A, []) == 1
    assert pf_delete(A, [1, 3, 4, 6]) == A[2, 5]
    assert pf_delete(A, []) == pf_eliminate(A)
    with pytest.raises(IndexError):
        pf_delete(A, [7])


def test_cayley_residual(rng):
    for n in range(0, 9):
        assert cayley_residual(rand_skew(rng, n, 9)) == 0
