import random
from fractions import Fraction

import pytest

from conserva.algebra import builtin, random_algebra, zero_algebra
from conserva.derivations import (
    HALF,
    UndefinedPointError,
    centroid,
    centroid_in_delta_check,
    delta_derivation_space,
    derivation_space,
    is_centroid_element,
    is_delta_derivation,
    is_local_delta_derivation,
    is_scalar_map,
    is_two_local_delta_derivation,
    local_map_space,
    required_samples,
    scalar_classification,
    two_local_table_space,
    verify_local_counterexample,
)
from conserva.exactnum import RatMatrix, subspace_equal
from conserva.known_forms import generators, matching_orientation, w2_commutative_form


def scalar_span(space, m):
    return subspace_equal([D.flat() for D in space], [RatMatrix.identity(m).flat()], m * m)


def test_half_derivations_of_tables(profiles):
    for name, p in profiles.items():
        assert scalar_span(p.half, p.algebra.dim), name


def test_zero_algebra_spaces():
    for m in (1, 2, 3):
        Z = zero_algebra(m)
        for delta in (HALF, 1, Fraction(-2, 3)):
            assert len(delta_derivation_space(Z, delta)) == m * m
        assert len(centroid(Z)) == m * m
        assert centroid_in_delta_check(Z)


def test_w2_derivations_have_two_parameters(profiles):
    p = profiles["W2-conservative"]
    assert len(p.der) == 2
    assert not scalar_classification(p.algebra, 1, p.der).is_scalar


def test_w2_commutative_derivations_match_published_form(profiles):
    p = profiles["W2-commutative"]
    assert matching_orientation(p.der, generators(w2_commutative_form)) == "row"
    assert scalar_classification(p.algebra, HALF, p.half).is_scalar


def test_scalar_classification_zero_algebra():
    report = scalar_classification(zero_algebra(2), HALF)
    assert not report.is_scalar and report.dim == 4


def test_centroid(profiles):
    for name, p in profiles.items():
        assert scalar_span(p.cent, p.algebra.dim), name
    assert centroid_in_delta_check(builtin("W2-conservative"))
    rng = random.Random(11)
    for _ in range(10):
        assert centroid_in_delta_check(random_algebra(rng.randint(1, 4), rng))


def test_solver_outputs_satisfy_identities():
    rng = random.Random(12)
    for _ in range(10):
        A = random_algebra(rng.randint(1, 4), rng, density=0.3)
        for delta in (HALF, 1, 2):
            for D in delta_derivation_space(A, delta):
                assert is_delta_derivation(A, D, delta)
        for G in centroid(A):
            assert is_centroid_element(A, G)
        assert len(derivation_space(A)) == len(delta_derivation_space(A, 1))


def test_local_examples(profiles):
    W = profiles["W2-conservative"]
    A = W.algebra
    samples = required_samples(A)
    rep = is_local_delta_derivation(A, RatMatrix.identity(8).scale(2), samples, HALF, W.half)
    assert rep.holds and rep.complete

    D = RatMatrix.from_rows([[int(i == j) * (2 if i == 1 else 1) for j in range(8)] for i in range(8)])
    rep = is_local_delta_derivation(A, D, samples, HALF, W.half)
    assert not rep.holds
    x = rep.counterexample
    assert x == tuple(Fraction(int(k < 2)) for k in range(8))
    assert verify_local_counterexample(A, D, x, W.half)

    Z = zero_algebra(3)
    rng = random.Random(13)
    D = RatMatrix.from_rows([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
    assert is_local_delta_derivation(Z, D, required_samples(Z)).holds


def test_local_needs_pairwise_sums(profiles):
    # on the basis alone every diagonal map passes
    A = profiles["S2"].algebra
    space = local_map_space(A, A.basis(), HALF, profiles["S2"].half)
    assert len(space) == A.dim
    assert scalar_span(local_map_space(A, required_samples(A), HALF, profiles["S2"].half), A.dim)


def test_local_dimension_errors(profiles):
    A = profiles["S2"].algebra
    with pytest.raises(ValueError):
        is_local_delta_derivation(A, RatMatrix.identity(3), required_samples(A))
    with pytest.raises(ValueError):
        is_local_delta_derivation(A, RatMatrix.identity(4), [(1, 0)])


def test_two_local_examples(profiles):
    for name, p in profiles.items():
        A = p.algebra
        D = {x: tuple(3 * v for v in x) for x in required_samples(A)}
        pairs = [(x, y) for x in required_samples(A) for y in A.basis()]
        assert is_two_local_delta_derivation(A, D, pairs, HALF, p.half).holds, name
        zero = {x: A.zero() for x in A.basis()}
        assert is_two_local_delta_derivation(A, zero, [(x, y) for x in A.basis() for y in A.basis()],
                                             HALF, p.half).holds

    p = profiles["W2-conservative"]
    A = p.algebra
    e1, e2 = A.basis_vector(0), A.basis_vector(1)
    D = {e1: e1, e2: tuple(2 * v for v in e2)}
    rep = is_two_local_delta_derivation(A, D, [(e1, e2)], HALF, p.half)
    assert not rep.holds and rep.counterexample == (e1, e2)
    with pytest.raises(UndefinedPointError):
        is_two_local_delta_derivation(A, D, [(e1, A.basis_vector(2))], HALF, p.half)


def test_two_local_nonlinear_map_on_zero_algebra():
    # on the zero algebra every pair of values is matched by some linear map
    Z = zero_algebra(2)
    pts = [(1, 0), (0, 1), (1, 1)]
    D = {(1, 0): (5, 0), (0, 1): (0, 0), (1, 1): (1, 7)}
    assert is_two_local_delta_derivation(Z, D, [(a, b) for a in pts for b in pts]).holds


def test_two_local_tables(profiles):
    for name, p in profiles.items():
        A = p.algebra
        m = A.dim
        tables = two_local_table_space(A, A.basis(), [(i, 0) for i in range(m)], HALF, p.half)
        assert subspace_equal(tables, [tuple(v for e in A.basis() for v in e)], m * m), name


def test_is_scalar_map():
    assert is_scalar_map(RatMatrix.identity(3).scale(Fraction(-2, 5))) == Fraction(-2, 5)
    assert is_scalar_map(RatMatrix.from_rows([[1, 0], [0, 2]])) is None
    assert is_scalar_map(RatMatrix.zeros(2, 2)) == 0
