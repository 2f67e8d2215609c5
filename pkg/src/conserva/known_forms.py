"""Published shapes of the derivation matrices of the three tabulated algebras.

Each form is a function of two parameters (a, b) returning the matrix as it
is printed; the generators are the forms at (1, 0) and (0, 1).  Printed
matrices do not say whether row or column i holds the image of the i-th
basis vector, so comparisons try both orientations.

The W(2) form whose basis is the one of the multiplication table is the
per-argument form of a biderivation (``w2_slice_form``); ``w2_source_form``
is quoted in the basis of the original classification and is only
comparable through basis-independent invariants.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .exactnum import RatMatrix, solve, subspace_equal


def w2_source_form(a, b) -> RatMatrix:
    return RatMatrix.from_rows([
        [0, a, 0, 0, 0, 0, 0, 0],
        [0, -b, 0, 0, 0, 0, 0, 0],
        [2 * a, 0, b, 0, 0, 0, 0, 0],
        [0, 0, 3 * a, 2 * b, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, -a, b, 0, 0],
        [0, 0, 0, 0, 0, 0, b, a],
        [0, 0, 0, 0, 0, 0, 0, 0],
    ])


def w2_slice_form(a, b) -> RatMatrix:
    return RatMatrix.from_rows([
        [0, a, a, 0, 0, 0, 0, 0],
        [0, b, 0, a, 0, 0, 0, 0],
        [0, 0, b, a, 0, 0, 0, 0],
        [0, 0, 0, 2 * b, 0, 0, 0, 0],
        [-a, 0, 0, 0, -b, a, a, 0],
        [0, -a, 0, 0, 0, 0, 0, a],
        [0, 0, -a, 0, 0, 0, 0, a],
        [0, 0, 0, -a, 0, 0, 0, b],
    ])


def w2_commutative_form(a, b) -> RatMatrix:
    return RatMatrix.from_rows([
        [0, a, 0, 0, 0, 0],
        [0, b, 2 * a, 0, 0, 0],
        [0, 0, 2 * b, 0, 0, 0],
        [-a, 0, 0, -b, a, 0],
        [0, -a, 0, 0, 0, 2 * a],
        [0, 0, -a, 0, 0, b],
    ])


def s2_form(a, b) -> RatMatrix:
    return RatMatrix.from_rows([
        [0, 0, 0, b],
        [-2 * b, a, 0, 0],
        [0, -3 * b, 2 * a, 0],
        [0, 0, 0, -a],
    ])


# forms stated in the basis of the corresponding multiplication table
TABLE_BASIS_FORMS: dict[str, Callable] = {
    "W2-conservative": w2_slice_form,
    "W2-commutative": w2_commutative_form,
    "S2": s2_form,
}


def generators(form: Callable) -> list[RatMatrix]:
    return [form(1, 0), form(0, 1)]


def matching_orientation(space: Sequence[RatMatrix], gens: Sequence[RatMatrix]) -> str | None:
    """"column" if span(gens) = span(space) as printed, "row" if it matches
    after transposing, None otherwise."""
    if not gens:
        return None
    n2 = gens[0].rows * gens[0].cols
    target = [D.flat() for D in space]
    if subspace_equal(target, [g.flat() for g in gens], n2):
        return "column"
    if subspace_equal(target, [g.transpose().flat() for g in gens], n2):
        return "row"
    return None


def oriented(gens: Sequence[RatMatrix], orientation: str) -> list[RatMatrix]:
    return [g.transpose() for g in gens] if orientation == "row" else list(gens)


# -- basis-independent invariants of a span of matrices -------------------

def charpoly(M: RatMatrix) -> tuple[Fraction, ...]:
    """Coefficients of det(t I - M), highest degree first (Faddeev-LeVerrier)."""
    n = M.rows
    coeffs = [Fraction(1)]
    N = RatMatrix.identity(n)
    ident = RatMatrix.identity(n)
    for k in range(1, n + 1):
        AN = M @ N
        c = -sum((AN[i, i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
        N = AN + ident.scale(c)
    return tuple(coeffs)


def commutator(X: RatMatrix, Y: RatMatrix) -> RatMatrix:
    return X @ Y - Y @ X


def two_dim_lie_invariants(gens: Sequence[RatMatrix]) -> dict:
    """Invariants of a 2-dimensional matrix Lie algebra span{X1, X2}.

    Reports whether the span is closed under commutators and abelian; for the
    non-abelian case, the characteristic polynomial of the element H with
    [H, X] = X, X spanning the derived algebra.  H is fixed up to adding
    multiples of X, which conjugates H and leaves the polynomial unchanged.
    """
    X1, X2 = gens
    C = commutator(X1, X2)
    basis = RatMatrix.from_columns([X1.flat(), X2.flat()])
    coords = solve(basis, C.flat())
    if coords is None:
        return {"closed": False}
    if C.is_zero():
        return {"closed": True, "abelian": True}
    # [s X1 + t X2, C] = C; the bracket of the span is rank one, so
    # [X1, C] = p C and [X2, C] = q C
    p = solve(RatMatrix.from_columns([C.flat()]), commutator(X1, C).flat())
    q = solve(RatMatrix.from_columns([C.flat()]), commutator(X2, C).flat())
    if p is None or q is None:
        return {"closed": True, "abelian": False, "solvable_normal_form": False}
    p, q = p[0], q[0]
    H = X1.scale(1 / p) if p else X2.scale(1 / q)
    return {"closed": True, "abelian": False, "charpoly_H": charpoly(H)}
