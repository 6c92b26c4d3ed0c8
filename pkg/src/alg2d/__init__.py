"""Isomorphism classes of two-dimensional algebras over finite fields."""

from .field import FieldElement, FieldSpec, make_field
from .algebra import BasisChange, StructureMatrix, act, is_isomorphic
from .families import FamilyClass, FamilyId, reduce_fifth_family, representative
from .census import burnside_count, classify, orbit_enumerate, verify_partition

__all__ = [
    "FieldElement", "FieldSpec", "make_field",
    "BasisChange", "StructureMatrix", "act", "is_isomorphic",
    "FamilyClass", "FamilyId", "reduce_fifth_family", "representative",
    "burnside_count", "classify", "orbit_enumerate", "verify_partition",
]
__version__ = "0.1.0"
