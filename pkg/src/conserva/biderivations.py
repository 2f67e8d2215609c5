"""Biderivations: bilinear maps that are derivations in each argument.

A candidate is a :class:`~conserva.kantor.BilinearMap` on the algebra with
d(e_i, e_j) = sum_k b[i][j][k] e_k, unknown ``b[i][j][k]`` being variable
``(i * m + j) * m + k``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .algebra import Algebra, multiply
from .derivations import derivation_space
from .exactnum import EchelonSystem, RatMatrix, in_span, span_rank
from .kantor import BilinearMap, symmetry_rows


def _add(row: dict, var: int, coef: Fraction):
    v = row.get(var, 0) + coef
    if v:
        row[var] = v
    else:
        row.pop(var, None)


def biderivation_equations(A: Algebra) -> Iterable[dict]:
    """Rows of both identities at every basis triple (e_i, e_j, e_l).

    d(e_i e_j, e_l) = e_i d(e_j, e_l) + d(e_i, e_l) e_j
    d(e_i, e_j e_l) = e_j d(e_i, e_l) + d(e_i, e_j) e_l
    """
    m = A.dim

    def var(i, j, k):
        return (i * m + j) * m + k

    for identity in (1, 2):
        for i in range(m):
            for j in range(m):
                for l in range(m):
                    rows = [dict() for _ in range(m)]
                    if identity == 1:
                        for s, c in A.product_terms(i, j):
                            for k in range(m):
                                _add(rows[k], var(s, l, k), c)
                        for r in range(m):
                            for k, c in A.product_terms(i, r):
                                _add(rows[k], var(j, l, r), -c)
                            for k, c in A.product_terms(r, j):
                                _add(rows[k], var(i, l, r), -c)
                    else:
                        for s, c in A.product_terms(j, l):
                            for k in range(m):
                                _add(rows[k], var(i, s, k), c)
                        for r in range(m):
                            for k, c in A.product_terms(j, r):
                                _add(rows[k], var(i, l, r), -c)
                            for k, c in A.product_terms(r, l):
                                _add(rows[k], var(i, j, r), -c)
                    yield from rows


def _solve(A: Algebra, sign: int = 0) -> list[BilinearMap]:
    m = A.dim
    system = EchelonSystem(m ** 3)
    if sign:
        for row in symmetry_rows(m, sign):
            system.add(row)
    for row in biderivation_equations(A):
        system.add(row)
    return [BilinearMap(m, v) for v in system.kernel_basis()]


def biderivation_space(A: Algebra) -> list[BilinearMap]:
    return _solve(A)


def symmetric_biderivation_space(A: Algebra) -> list[BilinearMap]:
    return _solve(A, 1)


def skew_biderivation_space(A: Algebra) -> list[BilinearMap]:
    return _solve(A, -1)


def split_symmetric(b: BilinearMap) -> tuple[BilinearMap, BilinearMap]:
    """(d+, d-) with d+(x, y) = d(x, y) + d(y, x), d-(x, y) = d(x, y) - d(y, x)."""
    n = b.n
    plus, minus = [], []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                plus.append(b.t(i, j, k) + b.t(j, i, k))
                minus.append(b.t(i, j, k) - b.t(j, i, k))
    return BilinearMap(n, tuple(plus)), BilinearMap(n, tuple(minus))


def direct_sum_check(A: Algebra, full=None, sym=None, skew=None) -> bool:
    """BDer = BDer+ (+) BDer- : dimensions add up, the parts meet only in 0,
    and both parts lie inside BDer."""
    full = biderivation_space(A) if full is None else full
    sym = symmetric_biderivation_space(A) if sym is None else sym
    skew = skew_biderivation_space(A) if skew is None else skew
    if len(full) != len(sym) + len(skew):
        return False
    span = [b.tensor for b in full]
    if any(not in_span(span, b.tensor) for b in sym + skew):
        return False
    return span_rank([b.tensor for b in sym + skew], A.dim ** 3) == len(sym) + len(skew)


# -- substitution checks ---------------------------------------------------

def biderivation_defect(A: Algebra, b: BilinearMap) -> list[tuple[int, int, int, int]]:
    """Triples (identity, i, j, l) at which ``b`` violates a defining identity."""
    basis = A.basis()
    mul = lambda u, v: multiply(A, u, v)  # noqa: E731
    bad = []
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            for l, z in enumerate(basis):
                lhs = b(mul(x, y), z)
                rhs = tuple(p + q for p, q in zip(mul(x, b(y, z)), mul(b(x, z), y)))
                if lhs != rhs:
                    bad.append((1, i, j, l))
                lhs = b(x, mul(y, z))
                rhs = tuple(p + q for p, q in zip(mul(y, b(x, z)), mul(b(x, y), z)))
                if lhs != rhs:
                    bad.append((2, i, j, l))
    return bad


def is_biderivation(A: Algebra, b: BilinearMap) -> bool:
    return not biderivation_defect(A, b)


def left_slice(b: BilinearMap, i: int) -> RatMatrix:
    """Matrix of x -> d(e_i, x)."""
    n = b.n
    return RatMatrix.from_columns([[b.t(i, j, k) for k in range(n)] for j in range(n)])


def right_slice(b: BilinearMap, j: int) -> RatMatrix:
    """Matrix of x -> d(x, e_j)."""
    n = b.n
    return RatMatrix.from_columns([[b.t(i, j, k) for k in range(n)] for i in range(n)])


def slices_in_derivations(A: Algebra, solutions: list[BilinearMap],
                          der: list[RatMatrix] | None = None) -> bool:
    """Every left and right slice of every solution is a derivation."""
    der = derivation_space(A) if der is None else der
    span = [D.flat() for D in der]
    for b in solutions:
        for i in range(A.dim):
            for S in (left_slice(b, i), right_slice(b, i)):
                if not in_span(span, S.flat()):
                    return False
    return True


def biderivation_space_via_slices(A: Algebra, der: list[RatMatrix] | None = None) -> list[BilinearMap]:
    """Second route to BDer(A).

    Write each left slice x -> d(e_i, x) as sum_t p[i][t] D_t over a basis
    D_t of Der(A) (so the second identity holds by construction), then
    impose that every right slice x -> d(x, e_l) is a derivation.
    """
    m = A.dim
    der = derivation_space(A) if der is None else der
    r = len(der)
    if r == 0:
        return []
    # b[i][j][k] = sum_t p[i][t] * D_t[k, j]
    system = EchelonSystem(m * r)

    def b_expr(i, j, k):
        return {i * r + t: D[k, j] for t, D in enumerate(der) if D[k, j]}

    for i in range(m):
        for j in range(m):
            for l in range(m):
                # d(e_i e_j, e_l) - e_i d(e_j, e_l) - d(e_i, e_l) e_j = 0
                rows = [dict() for _ in range(m)]
                for s, c in A.product_terms(i, j):
                    for k in range(m):
                        for v, coef in b_expr(s, l, k).items():
                            _add(rows[k], v, c * coef)
                for q in range(m):
                    for k, c in A.product_terms(i, q):
                        for v, coef in b_expr(j, l, q).items():
                            _add(rows[k], v, -c * coef)
                    for k, c in A.product_terms(q, j):
                        for v, coef in b_expr(i, l, q).items():
                            _add(rows[k], v, -c * coef)
                for row in rows:
                    system.add(row)
    out = []
    for p in system.kernel_basis():
        t = [Fraction(0)] * m ** 3
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    t[(i * m + j) * m + k] = sum((p[i * r + s] * D[k, j] for s, D in enumerate(der)), Fraction(0))
        out.append(BilinearMap(m, tuple(t)))
    return out
