"""Kantor's algebra W(n) of all multiplications on an n-dimensional space.

A multiplication N on V_n is a :class:`BilinearMap` with
N(v_i, v_j) = sum_k t[i][j][k] v_k; a linear map is a square
:class:`RatMatrix` (column j = image of v_j).  The bracket

    [M, N](u, v) = M(N(u, v)) - N(M u, v) - N(u, M v)

and the product M . N = [L_M e, N], where L_M e is u -> M(e, u), turn the
n^3-dimensional space of multiplications into the algebra W(n).  Its basis
is the elementary maps B(ijk) (B(v_i, v_j) = v_k) in lexicographic (i, j, k)
order, i.e. the flat index of t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, left_mul_matrix, multiply
from .exactnum import EchelonSystem, RatMatrix, Vector, as_vector, in_span, solve


@dataclass(frozen=True)
class BilinearMap:
    n: int
    tensor: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.tensor) != self.n ** 3:
            raise ValueError(f"{len(self.tensor)} entries for a bilinear map on dimension {self.n}")
        object.__setattr__(self, "tensor", tuple(Fraction(v) for v in self.tensor))

    @classmethod
    def zero(cls, n: int) -> "BilinearMap":
        return cls(n, (Fraction(0),) * n ** 3)

    @classmethod
    def elementary(cls, n: int, i: int, j: int, k: int) -> "BilinearMap":
        """B(v_i, v_j) = v_k, 0-based indices."""
        t = [Fraction(0)] * n ** 3
        t[(i * n + j) * n + k] = Fraction(1)
        return cls(n, tuple(t))

    @classmethod
    def of_algebra(cls, A: Algebra) -> "BilinearMap":
        return cls(A.dim, A.structure)

    def t(self, i: int, j: int, k: int) -> Fraction:
        return self.tensor[(i * self.n + j) * self.n + k]

    def __call__(self, u: Sequence, v: Sequence) -> Vector:
        n = self.n
        out = [Fraction(0)] * n
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                s = ui * vj
                base = (i * n + j) * n
                for k in range(n):
                    c = self.tensor[base + k]
                    if c:
                        out[k] += s * c
        return tuple(out)

    def left(self, e: Sequence) -> RatMatrix:
        """Matrix of u -> N(e, u)."""
        n = self.n
        cols = [self(e, tuple(Fraction(int(r == j)) for r in range(n))) for j in range(n)]
        return RatMatrix.from_columns(cols) if n else RatMatrix.zeros(0, 0)

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        _same_n(self.n, other.n)
        return BilinearMap(self.n, tuple(a + b for a, b in zip(self.tensor, other.tensor)))

    def scale(self, s) -> "BilinearMap":
        s = Fraction(s)
        return BilinearMap(self.n, tuple(s * a for a in self.tensor))

    def __neg__(self) -> "BilinearMap":
        return self.scale(-1)

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.t(i, j, k) == self.t(j, i, k) for i in range(n) for j in range(n) for k in range(n))


def _same_n(a: int, b: int):
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def bracket(M: RatMatrix, N: BilinearMap) -> BilinearMap:
    """[M, N](u, v) = M(N(u, v)) - N(M u, v) - N(u, M v) on all basis pairs."""
    n = N.n
    if M.rows != n or M.cols != n:
        raise ValueError(f"linear map is {M.rows}x{M.cols}, bilinear map lives on dimension {n}")
    t = N.tensor
    Mk = [[M[k, r] for r in range(n)] for k in range(n)]
    out = [Fraction(0)] * n ** 3
    for i in range(n):
        for j in range(n):
            base = (i * n + j) * n
            # M(N(e_i, e_j))
            for r in range(n):
                c = t[base + r]
                if c:
                    for k in range(n):
                        if Mk[k][r]:
                            out[base + k] += Mk[k][r] * c
            # N(M e_i, e_j) + N(e_i, M e_j)
            for r in range(n):
                p, q = Mk[r][i], Mk[r][j]
                if p:
                    src = (r * n + j) * n
                    for k in range(n):
                        if t[src + k]:
                            out[base + k] -= p * t[src + k]
                if q:
                    src = (i * n + r) * n
                    for k in range(n):
                        if t[src + k]:
                            out[base + k] -= q * t[src + k]
    return BilinearMap(n, tuple(out))


def kantor_product(M: BilinearMap, N: BilinearMap, e: Sequence) -> BilinearMap:
    """M . N = [L_M e, N]."""
    _same_n(M.n, N.n)
    if len(e) != M.n:
        raise ValueError(f"vector e has length {len(e)}, expected {M.n}")
    return bracket(M.left(as_vector(e)), N)


@dataclass(frozen=True)
class WnAlgebra:
    n: int
    e: Vector
    result: Algebra

    def element(self, N: BilinearMap) -> Vector:
        _same_n(self.n, N.n)
        return N.tensor

    def bilinear(self, x: Sequence) -> BilinearMap:
        return BilinearMap(self.n, tuple(x))


def wn_labels(n: int) -> tuple[str, ...]:
    return tuple(f"B{i + 1}{j + 1}{k + 1}" if n < 10 else f"B{i + 1}.{j + 1}.{k + 1}"
                 for i in range(n) for j in range(n) for k in range(n))


def build_wn(n: int, e: Sequence) -> WnAlgebra:
    """W(n) with the Kantor product for the fixed vector ``e``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    e = as_vector(e)
    if len(e) != n:
        raise ValueError(f"vector e has length {len(e)}, expected {n}")
    if not any(e):
        raise ValueError("the fixed vector e must be nonzero")
    size = n ** 3
    elementary = [BilinearMap.elementary(n, i, j, k)
                  for i in range(n) for j in range(n) for k in range(n)]
    lefts = [B.left(e) for B in elementary]
    structure = []
    for a in range(size):
        for b in range(size):
            structure.extend(bracket(lefts[a], elementary[b]).tensor)
    name = f"W({n}) e=({','.join(str(v) for v in e)})"
    return WnAlgebra(n, e, Algebra(name, size, wn_labels(n), tuple(structure)))


def symmetric_subspace(W: WnAlgebra | int) -> list[BilinearMap]:
    """Canonical basis of the commutative multiplications t[i][j][k] = t[j][i][k]."""
    n = W if isinstance(W, int) else W.n
    system = EchelonSystem(n ** 3)
    for row in symmetry_rows(n, 1):
        system.add(row)
    return [BilinearMap(n, v) for v in system.kernel_basis()]


def trace_zero_subspace(W: WnAlgebra | int) -> list[BilinearMap]:
    """Canonical basis of commutative N with tr(L_N v) = 0 for every v."""
    n = W if isinstance(W, int) else W.n
    system = EchelonSystem(n ** 3)
    for row in symmetry_rows(n, 1):
        system.add(row)
    for j in range(n):
        # tr(u -> N(v_j, u)) = sum_i t[j][i][i]
        system.add({(j * n + i) * n + i: Fraction(1) for i in range(n)})
    return [BilinearMap(n, v) for v in system.kernel_basis()]


def symmetry_rows(n: int, sign: int):
    """Rows of t[i][j][k] - sign * t[j][i][k] = 0 on an n^3 tensor."""
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                a, b = (i * n + j) * n + k, (j * n + i) * n + k
                if a == b:
                    if sign < 0:
                        yield {a: Fraction(1)}
                    continue
                yield {a: Fraction(1), b: Fraction(-sign)}


def is_closed(W: WnAlgebra, basis: Sequence[BilinearMap]) -> bool:
    """All Kantor products of basis pairs stay in the span."""
    return not closure_failures(W, basis)


def closure_failures(W: WnAlgebra, basis: Sequence[BilinearMap]) -> list[tuple[int, int]]:
    span = [B.tensor for B in basis]
    bad = []
    for a, M in enumerate(basis):
        for b, N in enumerate(basis):
            if not in_span(span, kantor_product(M, N, W.e).tensor):
                bad.append((a, b))
    return bad


def subalgebra(W: WnAlgebra, basis: Sequence[BilinearMap], name: str,
               labels: Sequence[str] | None = None) -> Algebra:
    """Structure constants of a product-closed span, in the given basis."""
    k = len(basis)
    columns = [B.tensor for B in basis]
    coords_matrix = RatMatrix.from_columns(columns)
    flat = []
    for M in basis:
        for N in basis:
            c = solve(coords_matrix, kantor_product(M, N, W.e).tensor)
            if c is None:
                raise ValueError("span is not closed under the Kantor product")
            flat.extend(c)
    return Algebra(name, k, tuple(labels or [f"b{i + 1}" for i in range(k)]), tuple(flat))


# -- conservativity --------------------------------------------------------

class _Products:
    """Basis products of ``A`` precomputed, for sums over basis quadruples."""

    def __init__(self, A: Algebra):
        self.A = A
        self.m = A.dim
        basis = A.basis()
        self.table = [[multiply(A, x, y) for y in basis] for x in basis]

    def left(self, i: int, v: Sequence) -> Vector:
        """e_i v."""
        return self._combine(v, self.table[i])

    def right(self, v: Sequence, j: int) -> Vector:
        """v e_j."""
        return self._combine(v, [row[j] for row in self.table])

    def _combine(self, coeffs, vectors) -> Vector:
        out = [Fraction(0)] * self.m
        for c, vec in zip(coeffs, vectors):
            if c:
                for k, x in enumerate(vec):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def mul(self, u: Sequence, v: Sequence) -> Vector:
        return multiply(self.A, u, v)


def _add(*vs) -> Vector:
    out = list(vs[0])
    for v in vs[1:]:
        for k, c in enumerate(v):
            if c:
                out[k] += c
    return tuple(out)


def _neg(v) -> Vector:
    return tuple(-c if c else c for c in v)


def _witness_rhs_all(A: Algebra):
    """Yield (a, b, x, y, rhs) over basis quadruples, with
    rhs = b(a(xy) - (ax)y - x(ay)) - a((bx)y) + (a(bx))y + (bx)(ay)
          - a(x(by)) + (ax)(by) + x(a(by))."""
    m = A.dim
    P = _Products(A)
    T = P.table
    for a in range(m):
        for b in range(m):
            for x in range(m):
                ax, bx = T[a][x], T[b][x]
                a_bx = P.left(a, bx)
                for y in range(m):
                    ay, by = T[a][y], T[b][y]
                    inner = _add(P.left(a, T[x][y]), _neg(P.right(ax, y)), _neg(P.left(x, ay)))
                    rhs = _add(
                        P.left(b, inner),
                        _neg(P.left(a, P.right(bx, y))),
                        P.right(a_bx, y),
                        P.mul(bx, ay),
                        _neg(P.left(a, P.left(x, by))),
                        P.mul(ax, by),
                        P.left(x, P.left(a, by)),
                    )
                    yield a, b, x, y, rhs


def find_associated_F(A: Algebra) -> BilinearMap | None:
    """A multiplication F with
    -F(a,b)(xy) + (F(a,b)x)y + x(F(a,b)y) = b(a(xy) - (ax)y - x(ay)) - a((bx)y)
        + (a(bx))y + (bx)(ay) - a(x(by)) + (ax)(by) + x(a(by))
    for all basis a, b, x, y, or None when no such F exists.

    Unknown F(e_a, e_b) = sum_k f[a][b][k] e_k; the equations for distinct
    (a, b) share no unknowns, so the m^3-unknown system is solved block by
    block.  Free parameters are set to 0.  The returned F has been
    substituted back through the bracket form [L_b, [L_a, P]] = -[L_F(a,b), P].
    """
    m = A.dim
    basis = A.basis()
    # coefficient of f_k in the (x, y, component) equation: -(e_k(xy)) + (e_k x) y + x (e_k y)
    lhs_rows = []
    for x in range(m):
        for y in range(m):
            xy = multiply(A, basis[x], basis[y])
            cols = []
            for k in range(m):
                ek = basis[k]
                v = [-p + q + r for p, q, r in zip(
                    multiply(A, ek, xy),
                    multiply(A, multiply(A, ek, basis[x]), basis[y]),
                    multiply(A, basis[x], multiply(A, ek, basis[y])))]
                cols.append(v)
            for comp in range(m):
                lhs_rows.append({k: cols[k][comp] for k in range(m) if cols[k][comp]})
    tensor = []
    system = None
    for a, b, x, y, rhs in _witness_rhs_all(A):
        if x == 0 and y == 0:
            if system is not None:
                tensor.extend(system.particular_solution())
            system = EchelonSystem(m)
        base = (x * m + y) * m
        for comp in range(m):
            system.add(lhs_rows[base + comp], rhs[comp])
            if system.inconsistent:
                return None
    if system is not None:
        tensor.extend(system.particular_solution())
    F = BilinearMap(m, tuple(tensor))
    if bracket_witness_defects(A, F):
        raise AssertionError("solver produced an F that does not satisfy the identity")
    return F


def bracket_witness_defects(A: Algebra, F: BilinearMap) -> list[tuple[int, int]]:
    """Basis pairs (a, b) where [L_b, [L_a, P]] != -[L_F(a,b), P]."""
    m = A.dim
    P = BilinearMap.of_algebra(A)
    basis = A.basis()
    lefts = [left_mul_matrix(A, e) for e in basis]
    # [L_f, P] is linear in f
    with_p = [bracket(L, P) for L in lefts]
    bad = []
    for a in range(m):
        inner = with_p[a]
        for b in range(m):
            lhs = bracket(lefts[b], inner)
            f_ab = F(basis[a], basis[b])
            rhs = BilinearMap.zero(m)
            for k, c in enumerate(f_ab):
                if c:
                    rhs = rhs + with_p[k].scale(c)
            if lhs != -rhs:
                bad.append((a, b))
    return bad


def is_conservative_with(A: Algebra, F: BilinearMap) -> bool:
    return not bracket_witness_defects(A, F)


def witness_defects(A: Algebra, F: BilinearMap) -> list[tuple[int, int, int, int]]:
    """Basis quadruples (a, b, x, y) at which, term by term,
    -F(a,b)(xy) + (F(a,b)x)y + x(F(a,b)y) differs from
    b(a(xy) - (ax)y - x(ay)) - a((bx)y) + (a(bx))y + (bx)(ay) - a(x(by)) + (ax)(by) + x(a(by))."""
    P = _Products(A)
    T = P.table
    basis = A.basis()
    bad = []
    f = None
    for a, b, x, y, rhs in _witness_rhs_all(A):
        if x == 0 and y == 0:
            f = F(basis[a], basis[b])
            fx = [P.mul(f, e) for e in basis]
        lhs = _add(_neg(P.mul(f, T[x][y])), P.right(fx[x], y), P.left(x, fx[y]))
        if lhs != rhs:
            bad.append((a, b, x, y))
    return bad


def products_vanish(A: Algebra, length: int) -> bool:
    """True iff every product of ``length`` basis elements, in every
    bracketing, vanishes."""
    memo: dict[int, list[Vector]] = {1: A.basis()}

    def values(k: int) -> list[Vector]:
        if k not in memo:
            out = []
            for split in range(1, k):
                for u in values(split):
                    for v in values(k - split):
                        w = multiply(A, u, v)
                        if any(w):
                            out.append(w)
            memo[k] = out
        return memo[k]

    return not values(length)
