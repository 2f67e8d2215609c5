"""Finite-dimensional algebras given by structure constants over Q."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .exactnum import RatMatrix, Vector, as_vector, format_rational, parse_rational

BUILTIN_FILES = {
    "W2-conservative": "w2_conservative.json",
    "W2-commutative": "w2_commutative.json",
    "S2": "s2.json",
}


class SchemaError(ValueError):
    """Raised when an algebra document does not follow the JSON schema."""


@dataclass(frozen=True)
class Algebra:
    """An algebra with basis e_1..e_m and e_i e_j = sum_k c[i][j][k] e_k.

    ``structure`` is the flat tensor, index ``(i * m + j) * m + k``
    (0-based).
    """

    name: str
    dim: int
    basis_labels: tuple[str, ...]
    structure: tuple[Fraction, ...]
    _products: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        m = self.dim
        if m < 0:
            raise ValueError("negative dimension")
        if len(self.structure) != m ** 3:
            raise ValueError(f"structure has {len(self.structure)} entries, expected {m ** 3}")
        if len(self.basis_labels) != m:
            raise ValueError(f"{len(self.basis_labels)} basis labels for dimension {m}")
        if len(set(self.basis_labels)) != m:
            raise ValueError("basis labels must be distinct")
        object.__setattr__(self, "structure", tuple(Fraction(v) for v in self.structure))
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        # sparse products e_i e_j as [(k, c)], used by the hot loops; integral
        # constants are kept as int, which is much cheaper than Fraction
        compact = [c.numerator if c.denominator == 1 else c for c in self.structure]
        prods = tuple(
            tuple(
                tuple((k, compact[(i * m + j) * m + k]) for k in range(m)
                      if compact[(i * m + j) * m + k])
                for j in range(m)
            )
            for i in range(m)
        )
        object.__setattr__(self, "_products", prods)

    @classmethod
    def from_tensor(cls, name: str, tensor, labels: Sequence[str] | None = None) -> "Algebra":
        """Build from a nested ``tensor[i][j][k]``."""
        m = len(tensor)
        flat = [tensor[i][j][k] for i in range(m) for j in range(m) for k in range(m)]
        return cls(name, m, tuple(labels or default_labels(m)), tuple(Fraction(v) for v in flat))

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.structure[(i * self.dim + j) * self.dim + k]

    def product_terms(self, i: int, j: int):
        """Nonzero ``(k, c[i][j][k])`` pairs of e_i e_j."""
        return self._products[i][j]

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def basis(self) -> list[Vector]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def zero(self) -> Vector:
        return (Fraction(0),) * self.dim

    def mul(self, x: Sequence, y: Sequence) -> Vector:
        return multiply(self, x, y)

    def is_commutative(self) -> bool:
        m = self.dim
        return all(self.c(i, j, k) == self.c(j, i, k)
                   for i in range(m) for j in range(m) for k in range(m))

    def format_element(self, x: Sequence) -> str:
        return format_element(x, self.basis_labels)


def default_labels(m: int, prefix: str = "e") -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(m))


def multiply(A: Algebra, x: Sequence, y: Sequence) -> Vector:
    """Bilinear extension of the structure constants."""
    m = A.dim
    if len(x) != m or len(y) != m:
        raise ValueError(f"element length mismatch for algebra of dimension {m}")
    out = [Fraction(0)] * m
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = A._products[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            s = xi * yj
            for k, c in row[j]:
                out[k] += s * c
    return tuple(out)


def left_mul_matrix(A: Algebra, x: Sequence) -> RatMatrix:
    """Matrix of y -> x y; column j is x e_j."""
    if len(x) != A.dim:
        raise ValueError(f"element length mismatch for algebra of dimension {A.dim}")
    return RatMatrix.from_columns([multiply(A, x, e) for e in A.basis()]) if A.dim else RatMatrix.zeros(0, 0)


def right_mul_matrix(A: Algebra, y: Sequence) -> RatMatrix:
    if len(y) != A.dim:
        raise ValueError(f"element length mismatch for algebra of dimension {A.dim}")
    return RatMatrix.from_columns([multiply(A, e, y) for e in A.basis()]) if A.dim else RatMatrix.zeros(0, 0)


def format_element(x: Sequence, labels: Sequence[str]) -> str:
    parts = []
    for c, label in zip(x, labels):
        if not c:
            continue
        if c == 1:
            term = label
        elif c == -1:
            term = f"-{label}"
        else:
            term = f"{format_rational(c)}{label}"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts) if parts else "0"


# -- JSON interchange -------------------------------------------------------

def to_document(A: Algebra) -> dict:
    m = A.dim
    triples = [
        [i + 1, j + 1, k + 1, format_rational(A.c(i, j, k))]
        for i in range(m) for j in range(m) for k in range(m) if A.c(i, j, k)
    ]
    return {"name": A.name, "dim": m, "basis": list(A.basis_labels), "structure": triples}


def from_document(doc) -> Algebra:
    if not isinstance(doc, dict):
        raise SchemaError("algebra document must be an object")
    missing = {"name", "dim", "basis", "structure"} - set(doc)
    if missing:
        raise SchemaError(f"missing keys: {sorted(missing)}")
    name, m, labels, triples = doc["name"], doc["dim"], doc["basis"], doc["structure"]
    if not isinstance(name, str):
        raise SchemaError("name must be a string")
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise SchemaError("dim must be a non-negative integer")
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise SchemaError("basis must be a list of strings")
    if len(labels) != m:
        raise SchemaError(f"basis has {len(labels)} labels, dim is {m}")
    if len(set(labels)) != m:
        raise SchemaError("basis labels must be distinct")
    if not isinstance(triples, list):
        raise SchemaError("structure must be a list")
    flat = [Fraction(0)] * m ** 3
    seen = set()
    for entry in triples:
        if not isinstance(entry, list) or len(entry) != 4:
            raise SchemaError(f"structure entry must be [i, j, k, value]: {entry!r}")
        i, j, k, value = entry
        for idx in (i, j, k):
            if not isinstance(idx, int) or isinstance(idx, bool) or not 1 <= idx <= m:
                raise SchemaError(f"index out of range 1..{m}: {entry!r}")
        if (i, j, k) in seen:
            raise SchemaError(f"duplicate structure entry {(i, j, k)}")
        seen.add((i, j, k))
        if not isinstance(value, (str, int)) or isinstance(value, bool):
            raise SchemaError(f"value must be a rational string: {entry!r}")
        try:
            q = parse_rational(value)
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        flat[((i - 1) * m + (j - 1)) * m + (k - 1)] = q
    return Algebra(name, m, tuple(labels), tuple(flat))


def save_algebra(A: Algebra) -> str:
    """Schema document as text, one structure triple per line."""
    doc = to_document(A)
    dump = lambda v: json.dumps(v, ensure_ascii=False)  # noqa: E731
    triples = ",\n".join("    " + dump(t) for t in doc["structure"])
    structure = f"[\n{triples}\n  ]" if triples else "[]"
    return (
        "{\n"
        f'  "name": {dump(doc["name"])},\n'
        f'  "dim": {doc["dim"]},\n'
        f'  "basis": {dump(doc["basis"])},\n'
        f'  "structure": {structure}\n'
        "}\n"
    )


def load_algebra(text: str) -> Algebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return from_document(doc)


def load_algebra_file(path) -> Algebra:
    return load_algebra(Path(path).read_text())


def builtin(name: str, algebra_dir=None) -> Algebra:
    """One of the three tabulated algebras.

    ``algebra_dir`` overrides the packaged tables with same-named files from
    another directory; tables missing there fall back to the packaged ones.
    """
    try:
        filename = BUILTIN_FILES[name]
    except KeyError:
        raise KeyError(f"unknown algebra {name!r}; choose from {sorted(BUILTIN_FILES)}") from None
    if algebra_dir is not None and (Path(algebra_dir) / filename).exists():
        return load_algebra_file(Path(algebra_dir) / filename)
    text = resources.files("conserva.data").joinpath(filename).read_text()
    return load_algebra(text)


# -- generators used by property tests and the verification suite ----------

def zero_algebra(m: int) -> Algebra:
    return Algebra(f"zero-{m}", m, default_labels(m), (Fraction(0),) * m ** 3)


def random_algebra(m: int, rng: random.Random, density: float = 0.5, bound: int = 3,
                   name: str | None = None) -> Algebra:
    flat = []
    for _ in range(m ** 3):
        if rng.random() < density:
            flat.append(Fraction(rng.randint(-bound, bound), rng.randint(1, 2)))
        else:
            flat.append(Fraction(0))
    return Algebra(name or f"random-{m}", m, default_labels(m), tuple(flat))


def random_nilpotent_algebra(m: int, rng: random.Random, bound: int = 3) -> Algebra:
    """Algebra with e_i e_j in span{e_k : k > max(i, j)} and every product
    of four elements zero."""
    grades = _grades(m)
    flat = [Fraction(0)] * m ** 3
    for i in range(m):
        for j in range(m):
            target = grades[i] + grades[j]
            for k in range(m):
                if grades[k] == target and target <= 3:
                    flat[(i * m + j) * m + k] = Fraction(rng.randint(-bound, bound))
    return Algebra(f"nilpotent-{m}", m, default_labels(m), tuple(flat))


def _grades(m: int) -> list[int]:
    # split the basis into degree-1, degree-2 and degree-3 parts
    d1 = max(1, (m + 2) // 3)
    d2 = max(0, (m - d1 + 1) // 2)
    return [1] * d1 + [2] * d2 + [3] * (m - d1 - d2)


def element_from_labels(A: Algebra, coeffs: dict) -> Vector:
    x = [Fraction(0)] * A.dim
    for label, c in coeffs.items():
        x[A.basis_labels.index(label)] += Fraction(c)
    return as_vector(x)
