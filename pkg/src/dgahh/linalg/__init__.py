from .rings import Ring, PrimeField, Integers, PolyRing, ZZ, UnsupportedRingError, ring_from_json, ring_to_json
from .matrix import ExactMatrix, rank, rank_kernel, rref
from .snf import SmithForm, smith_normal_form, invariant_factors
from .homology import (ChainComplex, HomologyGroup, InvalidComplexError, Subquotient,
                       homology_of_complex, subquotient)
from . import backend

__all__ = [
    "Ring", "PrimeField", "Integers", "PolyRing", "ZZ", "UnsupportedRingError",
    "ring_from_json", "ring_to_json", "ExactMatrix", "rank", "rank_kernel", "rref",
    "SmithForm", "smith_normal_form", "invariant_factors", "ChainComplex",
    "HomologyGroup", "InvalidComplexError", "Subquotient", "homology_of_complex",
    "subquotient", "backend",
]
