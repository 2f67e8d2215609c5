"""delta-derivations, centroids and local / 2-local 1/2-derivations.

A linear map is a :class:`RatMatrix` whose column j is the image of e_j.
Unknown maps are flattened row-major, so entry ``(r, c)`` is variable
``r * m + c``.  Equations are emitted in lexicographic ``(i, j, k)`` order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra, multiply
from .exactnum import (
    EchelonSystem,
    RatMatrix,
    Vector,
    as_vector,
    in_span,
    kernel_basis,
    solve,
    subspace_equal,
)

HALF = Fraction(1, 2)


def _accumulate(row: dict, var: int, coef: Fraction):
    v = row.get(var, 0) + coef
    if v:
        row[var] = v
    else:
        row.pop(var, None)


def delta_equations(A: Algebra, delta) -> Iterable[dict]:
    """Rows of d(e_i e_j) - delta (d(e_i) e_j + e_i d(e_j)) = 0."""
    m = A.dim
    delta = Fraction(delta)
    for i in range(m):
        for j in range(m):
            rows = [dict() for _ in range(m)]
            for s, c in A.product_terms(i, j):
                for k in range(m):
                    _accumulate(rows[k], k * m + s, c)
            if delta:
                for r in range(m):
                    for k, c in A.product_terms(r, j):
                        _accumulate(rows[k], r * m + i, -delta * c)
                    for k, c in A.product_terms(i, r):
                        _accumulate(rows[k], r * m + j, -delta * c)
            yield from rows


def centroid_equations(A: Algebra) -> Iterable[dict]:
    """Rows of g(e_i e_j) - g(e_i) e_j = 0, then g(e_i e_j) - e_i g(e_j) = 0."""
    m = A.dim
    for left in (True, False):
        for i in range(m):
            for j in range(m):
                rows = [dict() for _ in range(m)]
                for s, c in A.product_terms(i, j):
                    for k in range(m):
                        _accumulate(rows[k], k * m + s, c)
                for r in range(m):
                    terms = A.product_terms(r, j) if left else A.product_terms(i, r)
                    var = r * m + i if left else r * m + j
                    for k, c in terms:
                        _accumulate(rows[k], var, -c)
                yield from rows


def _solve_maps(m: int, rows: Iterable[dict]) -> list[RatMatrix]:
    system = EchelonSystem(m * m)
    for row in rows:
        system.add(row)
    return [RatMatrix.from_flat(m, v) for v in system.kernel_basis()]


def delta_derivation_space(A: Algebra, delta) -> list[RatMatrix]:
    """Canonical basis of {d : d(xy) = delta (d(x) y + x d(y))}."""
    return _solve_maps(A.dim, delta_equations(A, delta))


def derivation_space(A: Algebra) -> list[RatMatrix]:
    return delta_derivation_space(A, 1)


def centroid(A: Algebra) -> list[RatMatrix]:
    """Canonical basis of {g : g(xy) = g(x) y = x g(y)}."""
    return _solve_maps(A.dim, centroid_equations(A))


# -- direct substitution checks (independent of the equation assembly) -----

def delta_defect(A: Algebra, D: RatMatrix, delta) -> list[tuple[int, int, Vector]]:
    """Basis pairs (i, j) where the delta-derivation identity fails, with the
    residual d(e_i e_j) - delta (d(e_i) e_j + e_i d(e_j))."""
    delta = Fraction(delta)
    basis = A.basis()
    images = [D.apply(e) for e in basis]
    bad = []
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            lhs = D.apply(multiply(A, x, y))
            a = multiply(A, images[i], y)
            b = multiply(A, x, images[j])
            res = tuple(l - delta * (p + q) for l, p, q in zip(lhs, a, b))
            if any(res):
                bad.append((i, j, res))
    return bad


def is_delta_derivation(A: Algebra, D: RatMatrix, delta) -> bool:
    return not delta_defect(A, D, delta)


def is_centroid_element(A: Algebra, G: RatMatrix) -> bool:
    basis = A.basis()
    images = [G.apply(e) for e in basis]
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            g_xy = G.apply(multiply(A, x, y))
            if g_xy != multiply(A, images[i], y) or g_xy != multiply(A, x, images[j]):
                return False
    return True


def centroid_in_delta_check(A: Algebra) -> bool:
    """Every centroid element is a 1/2-derivation."""
    half = [D.flat() for D in delta_derivation_space(A, HALF)]
    return all(in_span(half, G.flat()) for G in centroid(A))


@dataclass(frozen=True)
class ScalarReport:
    delta: Fraction
    dim: int
    is_scalar: bool


def scalar_classification(A: Algebra, delta=HALF, space: list[RatMatrix] | None = None) -> ScalarReport:
    """Whether the delta-derivations are exactly the scalar maps."""
    if space is None:
        space = delta_derivation_space(A, delta)
    ident = [RatMatrix.identity(A.dim).flat()]
    scalar = subspace_equal([D.flat() for D in space], ident, length=A.dim ** 2)
    return ScalarReport(Fraction(delta), len(space), scalar)


# -- local and 2-local ------------------------------------------------------

def required_samples(A: Algebra) -> list[Vector]:
    """The basis vectors followed by every e_i + e_j with i < j."""
    basis = A.basis()
    points = list(basis)
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            points.append(tuple(a + b for a, b in zip(basis[i], basis[j])))
    return points


@dataclass
class LocalReport:
    holds: bool
    witnesses: list[tuple[Vector, Vector]] = field(default_factory=list)
    counterexample: Vector | None = None
    complete: bool = False
    note: str = ""


def _evaluation_matrix(space: Sequence[RatMatrix], points: Sequence[Sequence]) -> RatMatrix:
    """Column k stacks D_k(p) over the points."""
    columns = []
    for D in space:
        col = []
        for p in points:
            col.extend(D.apply(p))
        columns.append(col)
    rows = sum(len(p) for p in points)
    if not columns:
        return RatMatrix.zeros(rows, 0)
    return RatMatrix.from_columns(columns)


def _check_point(A: Algebra, x: Sequence):
    if len(x) != A.dim:
        raise ValueError(f"element length {len(x)} does not match dimension {A.dim}")


def is_local_delta_derivation(A: Algebra, D: RatMatrix, samples: Sequence[Sequence],
                              delta=HALF, space: list[RatMatrix] | None = None) -> LocalReport:
    """Test D(x) = d_x(x) for some delta-derivation d_x at every sample x.

    The answer is a proof when the delta-derivations are the scalar maps and
    the samples contain the basis and all pairwise sums e_i + e_j; otherwise
    a True answer only means no counterexample was found among the samples.
    """
    if D.rows != A.dim or D.cols != A.dim:
        raise ValueError(f"map is {D.rows}x{D.cols}, algebra has dimension {A.dim}")
    if not samples:
        raise ValueError("at least one sample point is required")
    if space is None:
        space = delta_derivation_space(A, delta)
    witnesses = []
    for x in samples:
        _check_point(A, x)
        x = as_vector(x)
        c = solve(_evaluation_matrix(space, [x]), D.apply(x))
        if c is None:
            return LocalReport(False, witnesses, x, True, "no delta-derivation agrees with D at this point")
        witnesses.append((x, c))
    scalar = scalar_classification(A, delta, space).is_scalar
    covered = {as_vector(s) for s in samples} >= set(required_samples(A))
    complete = scalar and covered
    if complete:
        note = "complete: delta-derivations are scalar and the structured samples were all checked"
    elif not scalar:
        note = "sample-based: no counterexample among the samples; delta-derivations are not only scalars"
    else:
        note = "sample-based: samples do not include every e_i and e_i + e_j"
    return LocalReport(True, witnesses, None, complete, note)


def verify_local_counterexample(A: Algebra, D: RatMatrix, x: Sequence, space: list[RatMatrix]) -> bool:
    """Independent rank test: True iff D(x) is outside {d(x) : d in span(space)}."""
    images = [d.apply(x) for d in space]
    return not in_span(images, D.apply(x)) if images else any(D.apply(x))


@dataclass
class TwoLocalReport:
    holds: bool
    witnesses: list[tuple[Vector, Vector, Vector]] = field(default_factory=list)
    counterexample: tuple[Vector, Vector] | None = None


class UndefinedPointError(KeyError):
    """The extensional map has no value at a requested point."""


def is_two_local_delta_derivation(A: Algebra, D: Mapping, pairs: Sequence[tuple[Sequence, Sequence]],
                                  delta=HALF, space: list[RatMatrix] | None = None) -> TwoLocalReport:
    """For each (x, y), look for one delta-derivation matching D at x and y.

    ``D`` maps points (tuples of Fractions or ints) to their images and need
    not be linear.  Pairs are checked in order; the first failing pair is
    reported.
    """
    if space is None:
        space = delta_derivation_space(A, delta)
    table = {as_vector(k): as_vector(v) for k, v in D.items()}

    def value(p):
        try:
            return table[as_vector(p)]
        except KeyError:
            raise UndefinedPointError(f"D is not defined at {tuple(map(str, p))}") from None

    witnesses = []
    for x, y in pairs:
        _check_point(A, x)
        _check_point(A, y)
        x, y = as_vector(x), as_vector(y)
        rhs = value(x) + value(y)
        c = solve(_evaluation_matrix(space, [x, y]), rhs)
        if c is None:
            return TwoLocalReport(False, witnesses, (x, y))
        witnesses.append((x, y, c))
    return TwoLocalReport(True, witnesses)


def is_scalar_map(D: RatMatrix) -> Fraction | None:
    """The lambda with D = lambda id, or None."""
    if D.rows != D.cols:
        return None
    lam = D[0, 0] if D.rows else Fraction(0)
    return lam if D == RatMatrix.identity(D.rows).scale(lam) else None


# -- exact description of everything that passes the local tests ----------

def _annihilator(vectors: Sequence[Sequence], length: int) -> list[Vector]:
    """Basis of {w : w . v = 0 for every v}."""
    if not vectors:
        return [tuple(Fraction(int(i == j)) for i in range(length)) for j in range(length)]
    return kernel_basis(RatMatrix.from_rows(vectors, length))


def local_map_space(A: Algebra, samples: Sequence[Sequence], delta=HALF,
                    space: list[RatMatrix] | None = None) -> list[RatMatrix]:
    """All linear D with D(x) in {d(x) : d a delta-derivation} at each sample.

    For fixed x that condition says D(x) lies in a subspace, which is linear
    in the entries of D, so the maps passing :func:`is_local_delta_derivation`
    on ``samples`` form exactly the returned span.
    """
    m = A.dim
    if space is None:
        space = delta_derivation_space(A, delta)
    system = EchelonSystem(m * m)
    for x in samples:
        _check_point(A, x)
        for w in _annihilator([d.apply(x) for d in space], m):
            # w . D(x) = sum_{r,c} w_r x_c D[r, c]
            system.add({r * m + c: w[r] * x[c] for r in range(m) if w[r]
                        for c in range(m) if x[c]})
    return [RatMatrix.from_flat(m, v) for v in system.kernel_basis()]


def two_local_table_space(A: Algebra, points: Sequence[Sequence], pairs: Sequence[tuple[int, int]],
                          delta=HALF, space: list[RatMatrix] | None = None) -> list[Vector]:
    """All value tables (D(p_0), ..., D(p_{n-1})) passing the 2-local test on
    the index pairs ``pairs``, flattened point by point.

    Each pair constrains (D(p_a), D(p_b)) to a subspace of A x A, so the
    passing tables form a subspace even though D itself need not be linear.
    """
    m = A.dim
    if space is None:
        space = delta_derivation_space(A, delta)
    system = EchelonSystem(m * len(points))
    for a, b in pairs:
        x, y = points[a], points[b]
        _check_point(A, x)
        _check_point(A, y)
        joint = [d.apply(x) + d.apply(y) for d in space]
        for w in _annihilator(joint, 2 * m):
            row = {}
            for k in range(m):
                if w[k]:
                    row[a * m + k] = row.get(a * m + k, 0) + w[k]
                if w[m + k]:
                    row[b * m + k] = row.get(b * m + k, 0) + w[m + k]
            system.add(row)
    return system.kernel_basis()
