"""Exact rational scalars and dense/sparse linear algebra over Q.

Scalars are :class:`fractions.Fraction`, which is always kept in lowest terms
with a positive denominator.  Matrices are immutable :class:`RatMatrix`
values; vectors are tuples of fractions.

Flattening convention (used by every caller of :func:`subspace_equal`):
matrices are flattened row-major, rank-3 tensors index-lexicographically in
``(i, j, k)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Vector = tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Decimals and floats are rejected so that no rounded value can enter the
    system.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise ValueError(f"not a rational: {value!r}")
    match = _RATIONAL_RE.match(value)
    if match is None:
        raise ValueError(f"not a rational: {value!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {value!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class RatMatrix:
    """Dense immutable rational matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(Fraction(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        cols = len(columns)
        rows = len(columns[0]) if cols else 0
        return cls.from_rows([[columns[j][i] for j in range(cols)] for i in range(rows)], cols)

    @classmethod
    def from_flat(cls, n: int, flat: Sequence) -> "RatMatrix":
        """Square matrix from its row-major flattening."""
        return cls(n, n, tuple(Fraction(v) for v in flat))

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def flat(self) -> Vector:
        return self.entries

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
            for i in range(self.rows)
        )

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix.from_columns([self.apply(c) for c in cols]) if cols else RatMatrix.zeros(self.rows, 0)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "RatMatrix":
        s = Fraction(s)
        return RatMatrix(self.rows, self.cols, tuple(s * a for a in self.entries))

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_columns([self.row(i) for i in range(self.rows)]) if self.rows else RatMatrix.zeros(self.cols, 0)

    def is_zero(self) -> bool:
        return not any(self.entries)


def rref(A: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row-echelon form and the (increasing) pivot columns.

    The pivot in each column is the first row at or below the current pivot
    row with a nonzero entry; no magnitude pivoting.
    """
    m = [list(A.row(i)) for i in range(A.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        p = next((i for i in range(r, A.rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        pivot_row = m[r]
        for i in range(A.rows):
            f = m[i][c]
            if i != r and f:
                m[i] = [a - f * b for a, b in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
    return RatMatrix.from_rows(m, A.cols), pivots


def rank(A: RatMatrix) -> int:
    return len(rref(A)[1])


def _kernel_from_rref(R: RatMatrix, pivots: list[int]) -> list[Vector]:
    n = R.cols
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -R[r, f]
        basis.append(tuple(x))
    return basis


def kernel_basis(A: RatMatrix) -> list[Vector]:
    """Canonical basis of the null space of ``A``.

    One vector per free column, in increasing column order; that free
    coordinate is exactly 1 and the other free coordinates are 0.
    """
    R, pivots = rref(A)
    return _kernel_from_rref(R, pivots)


def _check_lengths(vectors: Sequence[Sequence], length: int | None) -> int | None:
    for v in vectors:
        if length is None:
            length = len(v)
        elif len(v) != length:
            raise ValueError(f"dimension mismatch: vectors of length {length} and {len(v)}")
    return length


def span_rank(vectors: Sequence[Sequence], length: int | None = None) -> int:
    length = _check_lengths(vectors, length)
    if not vectors:
        return 0
    return len(reduce_rows(vectors).pivots)


def subspace_equal(B1: Sequence[Sequence], B2: Sequence[Sequence], length: int | None = None) -> bool:
    """True iff the spans of ``B1`` and ``B2`` coincide.

    Raises ``ValueError`` when the vectors have different lengths.  Pass
    ``length`` to also check the ambient dimension when a basis is empty.
    """
    length = _check_lengths(list(B1) + list(B2), length)
    r1 = span_rank(B1)
    r2 = span_rank(B2)
    if r1 != r2:
        return False
    return span_rank(list(B1) + list(B2)) == r1


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    _check_lengths(list(basis) + [v], None)
    if not any(v):
        return True
    return span_rank(list(basis) + [v]) == span_rank(basis)


def solve(A: RatMatrix, b: Sequence) -> Vector | None:
    """One solution of ``A x = b`` with all free variables 0, or None."""
    if len(b) != A.rows:
        raise ValueError("right-hand side length mismatch")
    system = EchelonSystem(A.cols)
    for i in range(A.rows):
        system.add_dense(A.row(i), b[i])
    return system.particular_solution()


class EchelonSystem:
    """Incrementally maintained reduced row-echelon form of a linear system.

    Rows are sparse ``{column: value}`` mappings.  After every insertion the
    stored rows are fully reduced, so the final state is the unique RREF of
    the rows added so far; its kernel basis equals the one produced by
    :func:`kernel_basis` on the dense matrix.  Solvers feed equations here
    one at a time, which keeps memory proportional to the rank instead of
    the equation count.

    Internally each row is kept as primitive integers (content divided out,
    pivot positive) with the right-hand side under key ``ncols``; dividing
    by the pivot gives the usual normalized RREF row.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, dict[int, int]] = {}
        self.inconsistent = False
        self.equations = 0

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def add_dense(self, row: Sequence, rhs=0) -> bool:
        return self.add({j: v for j, v in enumerate(row) if v}, rhs)

    def _integer_row(self, row: Mapping, rhs) -> dict[int, int]:
        items = [(j, v) for j, v in row.items() if v]
        if rhs:
            items.append((self.ncols, rhs))
        nums, dens = {}, {}
        for j, v in items:
            if isinstance(v, int):
                nums[j], dens[j] = v, 1
            else:
                v = v if isinstance(v, Fraction) else Fraction(v)
                nums[j], dens[j] = v.numerator, v.denominator
        scale = math.lcm(*dens.values()) if dens else 1
        if scale == 1:
            return nums
        return {j: n * (scale // dens[j]) for j, n in nums.items()}

    def add(self, row: Mapping[int, Fraction], rhs=0) -> bool:
        """Insert one equation; returns True if it raised the rank."""
        self.equations += 1
        n = self.ncols
        if row and not (0 <= min(row) and max(row) < n):
            raise IndexError(f"column out of range for {n} columns")
        work = self._integer_row(row, rhs)
        rows = self._rows
        for c in [c for c in work if c in rows]:
            f = work.get(c)
            if not f:
                continue
            prow = rows[c]
            a = prow[c]
            if a != 1:
                work = {j: a * v for j, v in work.items()}
            for j, v in prow.items():
                nv = work.get(j, 0) - f * v
                if nv:
                    work[j] = nv
                else:
                    work.pop(j, None)
        lhs = [j for j in work if j != n]
        if not lhs:
            if work:
                self.inconsistent = True
            return False
        p = min(lhs)
        new = _primitive(work, work[p] < 0)
        a = new[p]
        for c, other in rows.items():
            f = other.get(p)
            if f:
                if a != 1:
                    other = {j: a * v for j, v in other.items()}
                for j, v in new.items():
                    nv = other.get(j, 0) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
                rows[c] = _primitive(other, False)
        rows[p] = new
        return True

    def _entry(self, p: int, j: int) -> Fraction:
        row = self._rows[p]
        return Fraction(row.get(j, 0), row[p])

    def rref(self) -> tuple[RatMatrix, list[int]]:
        pivots = self.pivots
        rows = []
        for p in pivots:
            dense = [Fraction(0)] * self.ncols
            for j in self._rows[p]:
                if j < self.ncols:
                    dense[j] = self._entry(p, j)
            rows.append(dense)
        return RatMatrix.from_rows(rows, self.ncols), pivots

    def kernel_basis(self) -> list[Vector]:
        pivots = self.pivots
        pivot_set = set(pivots)
        n = self.ncols
        # column -> [(pivot, coefficient)] so each basis vector is built in O(nnz)
        by_col: dict[int, list[tuple[int, Fraction]]] = {}
        for p in pivots:
            for j in self._rows[p]:
                if j != p and j < n:
                    by_col.setdefault(j, []).append((p, self._entry(p, j)))
        basis = []
        for f in range(n):
            if f in pivot_set:
                continue
            x = [Fraction(0)] * n
            x[f] = Fraction(1)
            for p, v in by_col.get(f, ()):
                x[p] = -v
            basis.append(tuple(x))
        return basis

    def particular_solution(self) -> Vector | None:
        if self.inconsistent:
            return None
        x = [Fraction(0)] * self.ncols
        for p in self._rows:
            x[p] = self._entry(p, self.ncols)
        return tuple(x)


def _primitive(row: dict[int, int], negate: bool) -> dict[int, int]:
    g = math.gcd(*row.values())
    if negate:
        g = -g
    if g == 1:
        return row
    return {j: v // g for j, v in row.items()}


def reduce_rows(vectors: Sequence[Sequence]) -> EchelonSystem:
    length = len(vectors[0]) if vectors else 0
    system = EchelonSystem(length)
    for v in vectors:
        system.add_dense(v)
    return system


def null_space(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[Vector]:
    """Kernel basis of a homogeneous system given as sparse rows."""
    system = EchelonSystem(ncols)
    for row in rows:
        system.add(row)
    return system.kernel_basis()
