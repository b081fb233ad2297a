"""Exact braided gauge theory over Z_n-graded (anyonic) vector spaces.

Scalars live in the cyclotomic field Q(q); everything else is finite
dimensional linear algebra over it, so every comparison is exact.
"""

from .anyonic import AnyonicModel, CompositeModel, anyonic_hopf, truncated_line
from .braided_algebra import AlgebraStructure, BraidedHopf, Coaction, check_hopf
from .cyclotomic import Scalar, field, parse_scalar
from .gauge import LocalTheory, PrincipalBundle, Trivialization
from .graded_linear import GradedMap, GradedSpace

__version__ = "0.1.0"

__all__ = [
    "AlgebraStructure", "AnyonicModel", "BraidedHopf", "Coaction", "CompositeModel",
    "GradedMap", "GradedSpace", "LocalTheory", "PrincipalBundle", "Scalar", "Trivialization",
    "anyonic_hopf", "check_hopf", "field", "parse_scalar", "truncated_line",
]
