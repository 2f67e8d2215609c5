import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conserva.exactnum import (
    EchelonSystem,
    RatMatrix,
    format_rational,
    in_span,
    kernel_basis,
    parse_rational,
    rank,
    rref,
    solve,
    span_rank,
    subspace_equal,
)


def test_parse_and_format():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(7) == 7
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(Fraction(5)) == "5"


@pytest.mark.parametrize("bad", ["1/0", "0.5", "1e3", "", "a/b", True, 0.5, None])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_rref_examples():
    R, piv = rref(RatMatrix.identity(2))
    assert R == RatMatrix.identity(2) and piv == [0, 1]
    R, piv = rref(RatMatrix.zeros(3, 2))
    assert R == RatMatrix.zeros(3, 2) and piv == []
    R, piv = rref(RatMatrix.from_rows([[2, 4], [1, 2]]))
    assert R == RatMatrix.from_rows([[1, 2], [0, 0]]) and piv == [0]


def test_kernel_examples():
    assert kernel_basis(RatMatrix.identity(4)) == []
    assert kernel_basis(RatMatrix.zeros(1, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert kernel_basis(RatMatrix.from_rows([[1, 2]])) == [(-2, 1)]


def test_subspace_equal_examples():
    assert subspace_equal([(1, 0)], [(2, 0)])
    assert not subspace_equal([(1, 0)], [(0, 1)])
    assert subspace_equal([(1, 1), (1, -1)], [(1, 0), (0, 1)])
    assert subspace_equal([], [], 3)
    with pytest.raises(ValueError):
        subspace_equal([(1, 0)], [(1, 0, 0)])


def test_in_span_and_solve():
    assert in_span([], (0, 0))
    assert not in_span([], (1, 0))
    assert in_span([(1, 2), (0, 1)], (3, 1))
    A = RatMatrix.from_rows([[1, 1], [1, -1]])
    assert solve(A, (2, 0)) == (1, 1)
    assert solve(RatMatrix.from_rows([[1, 1], [2, 2]]), (1, 3)) is None


def random_matrix(rng, rows, cols, bound=3):
    return RatMatrix.from_rows([[Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
                                 for _ in range(cols)] for _ in range(rows)])


rationals = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def matrices(draw):
    r, c = draw(st.integers(0, 5)), draw(st.integers(0, 5))
    rows = [[draw(rationals) for _ in range(c)] for _ in range(r)]
    return RatMatrix.from_rows(rows, c)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_properties(A):
    basis = kernel_basis(A)
    assert rank(A) + len(basis) == A.cols
    for v in basis:
        assert not any(A.apply(v))
    # canonical shape: free coordinates form an identity block
    R, piv = rref(A)
    free = [c for c in range(A.cols) if c not in piv]
    for v, f in zip(basis, free):
        assert [v[g] for g in free] == [int(g == f) for g in free]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_is_idempotent_and_row_equivalent(A):
    R, piv = rref(A)
    assert rref(R) == (R, piv)
    rows = [A.row(i) for i in range(A.rows)]
    nonzero = [R.row(i) for i in range(len(piv))]
    assert subspace_equal(rows, nonzero, A.cols)


def test_echelon_system_matches_dense_rref():
    rng = random.Random(7)
    for _ in range(50):
        A = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        system = EchelonSystem(A.cols)
        for i in range(A.rows):
            system.add_dense(A.row(i))
        R, piv = rref(A)
        S, spiv = system.rref()
        assert spiv == piv
        assert S == RatMatrix.from_rows([R.row(i) for i in range(len(piv))], A.cols)
        assert system.kernel_basis() == kernel_basis(A)


def test_echelon_system_inconsistent():
    system = EchelonSystem(2)
    system.add({0: 1, 1: 1}, 1)
    system.add({0: 2, 1: 2}, 3)
    assert system.inconsistent
    assert system.particular_solution() is None
    with pytest.raises(IndexError):
        system.add({5: 1})


def test_span_rank():
    assert span_rank([]) == 0
    assert span_rank([(1, 2, 3), (2, 4, 6), (0, 0, 1)]) == 2


@st.composite
def bases(draw, length=3):
    k = draw(st.integers(0, 3))
    return [tuple(draw(st.integers(-2, 2)) for _ in range(length)) for _ in range(k)]


@settings(max_examples=60, deadline=None)
@given(bases(), bases(), bases())
def test_subspace_equal_is_an_equivalence(B1, B2, B3):
    assert subspace_equal(B1, B1, 3)
    assert subspace_equal(B1, B2, 3) == subspace_equal(B2, B1, 3)
    if subspace_equal(B1, B2, 3) and subspace_equal(B2, B3, 3):
        assert subspace_equal(B1, B3, 3)
    # a basis and its RREF rows span the same space
    if B1:
        R, piv = rref(RatMatrix.from_rows(B1, 3))
        assert subspace_equal(B1, [R.row(i) for i in range(len(piv))], 3)
