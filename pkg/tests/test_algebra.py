import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conserva.algebra import (
    SchemaError,
    builtin,
    element_from_labels,
    from_document,
    left_mul_matrix,
    load_algebra,
    multiply,
    random_algebra,
    right_mul_matrix,
    save_algebra,
    zero_algebra,
)
from conserva.exactnum import RatMatrix


def test_w2_table_entries():
    W = builtin("W2-conservative")
    e = W.basis()
    assert multiply(W, e[0], e[0]) == tuple(-v for v in e[0])
    assert not any(multiply(W, e[2], e[4]))
    assert multiply(W, e[1], e[4]) == element_from_labels(W, {"e1": 1, "e6": -1, "e7": -1})


def test_zero_times_anything():
    W = builtin("W2-conservative")
    y = element_from_labels(W, {"e2": 3, "e5": Fraction(-1, 2)})
    assert not any(multiply(W, W.zero(), y))


def test_left_multiplication_matrices():
    S = builtin("S2")
    z1 = S.basis_vector(0)
    assert left_mul_matrix(S, z1) == RatMatrix.from_rows(
        [[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, -3]])
    assert left_mul_matrix(S, S.zero()).is_zero()

    W = builtin("W2-conservative")
    L6 = left_mul_matrix(W, W.basis_vector(5))
    expected = {1: {"e2": -1}, 2: {"e3": -1}, 3: {"e4": -2}, 4: {"e5": 1}, 7: {"e8": -1}}
    for j in range(8):
        assert L6.column(j) == element_from_labels(W, expected.get(j, {}))


def test_right_mul_is_transpose_view():
    rng = random.Random(3)
    A = random_algebra(3, rng)
    x, y = A.basis_vector(1), (Fraction(1), Fraction(-2), Fraction(1, 3))
    assert right_mul_matrix(A, y).apply(x) == multiply(A, x, y) == left_mul_matrix(A, x).apply(y)


def test_builtin_dimensions():
    assert builtin("S2").dim == 4
    assert builtin("W2-commutative").dim == 6
    assert builtin("W2-conservative").dim == 8
    with pytest.raises(KeyError):
        builtin("W3")


def test_builtin_directory_override(tmp_path):
    S = builtin("S2")
    (tmp_path / "s2.json").write_text(save_algebra(zero_algebra(4)))
    assert builtin("S2", tmp_path).structure == zero_algebra(4).structure
    # tables missing from the directory come from the package
    assert builtin("W2-commutative", tmp_path) == builtin("W2-commutative")
    assert builtin("S2") == S


@pytest.mark.parametrize("name", ["W2-conservative", "W2-commutative", "S2"])
def test_round_trip(name):
    A = builtin(name)
    assert load_algebra(save_algebra(A)) == A


def test_sparse_document():
    doc = {"name": "t", "dim": 2, "basis": ["a", "b"],
           "structure": [[1, 1, 1, "1"], [1, 1, 2, "-1/2"], [1, 2, 1, "2"], [1, 2, 2, "3"],
                         [2, 1, 1, "4"], [2, 1, 2, "5"], [2, 2, 1, "7/3"]]}
    A = from_document(doc)
    assert A.c(1, 1, 1) == 0
    assert A.c(0, 0, 1) == Fraction(-1, 2)
    assert A.c(1, 1, 0) == Fraction(7, 3)


@pytest.mark.parametrize("doc", [
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, 1, "1/0"]]},
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, 1, "0.5"]]},
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, 1, 0.5]]},
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, 2, "1"]]},
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, 1, "1"], [1, 1, 1, "2"]]},
    {"name": "t", "dim": 2, "basis": ["a"], "structure": []},
    {"name": "t", "dim": 2, "basis": ["a", "a"], "structure": []},
    {"name": "t", "dim": 1, "basis": ["a"]},
    {"name": "t", "dim": 1, "basis": ["a"], "structure": [[1, 1, "1"]]},
    [],
])
def test_schema_errors(doc):
    with pytest.raises(SchemaError):
        from_document(doc)


def test_load_rejects_bad_json():
    with pytest.raises(SchemaError):
        load_algebra("{not json")


def test_saved_text_is_valid_json():
    doc = json.loads(save_algebra(builtin("S2")))
    assert doc["basis"] == ["z1", "z2", "z3", "z4"]
    assert [2, 2, 2, "-3"] in doc["structure"]


vec3 = st.lists(st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)), min_size=3, max_size=3)


@settings(max_examples=50, deadline=None)
@given(vec3, vec3, vec3, st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3)), st.integers(0, 100))
def test_multiply_is_bilinear(x, y, z, s, seed):
    A = random_algebra(3, random.Random(seed))
    xs = tuple(s * a + b for a, b in zip(x, z))
    lhs = multiply(A, xs, y)
    rhs = tuple(s * a + b for a, b in zip(multiply(A, x, y), multiply(A, z, y)))
    assert lhs == rhs
    ys = tuple(s * a + b for a, b in zip(y, z))
    lhs = multiply(A, x, ys)
    rhs = tuple(s * a + b for a, b in zip(multiply(A, x, y), multiply(A, x, z)))
    assert lhs == rhs


def test_dimension_mismatch():
    A = builtin("S2")
    with pytest.raises(ValueError):
        multiply(A, (1, 0), A.basis_vector(0))
    with pytest.raises(ValueError):
        left_mul_matrix(A, (1, 0, 0))
