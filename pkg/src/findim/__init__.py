"""Exact homological invariants of bound quiver algebras over F_p."""

__version__ = "0.1.0"

from .algebra import (Arrow, PathAlgebra, Quiver, Relation, build_algebra,
                      projective, radical_power_quotient, regular, simple)
from .modules import (Module, Morphism, direct_sum, ext1_dim, hom_basis,
                      kernel, quotient, radical, submodule_generated, syzygy,
                      top, trace_quotient, universal_extension, zero_module)

__all__ = [
    "Arrow", "PathAlgebra", "Quiver", "Relation", "build_algebra",
    "projective", "radical_power_quotient", "regular", "simple",
    "Module", "Morphism", "direct_sum", "ext1_dim", "hom_basis", "kernel",
    "quotient", "radical", "submodule_generated", "syzygy", "top",
    "trace_quotient", "universal_extension", "zero_module",
]
