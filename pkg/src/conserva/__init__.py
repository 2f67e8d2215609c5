"""Exact-arithmetic toolkit for conservative algebras: derivations,
1/2-derivations, centroids, biderivations and the Kantor product."""

from .algebra import Algebra, builtin, load_algebra, save_algebra
from .exactnum import RatMatrix, kernel_basis, parse_rational, rref

__all__ = [
    "Algebra",
    "RatMatrix",
    "builtin",
    "kernel_basis",
    "load_algebra",
    "parse_rational",
    "rref",
    "save_algebra",
]
__version__ = "0.1.0"
