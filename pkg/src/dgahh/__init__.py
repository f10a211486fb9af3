"""Homology, Hochschild homology and spectral sequence bookkeeping for small DGAs."""
from .dga import (Dga, builtin, builtin_endomorphism_dga, builtin_formal_polynomial, builtin_Y2,
                  homology, homology_ring, mod_p_reduction, tensor_dga, truncate, validate)
from .graded import Generator, GradedAlgebraPresentation
from .hochschild import cyclic_bar, hh_cohomology_dims, hh_dims, hh_graded_closed_form
from .specseq import bokstedt_pattern, e_infinity_dims, page_from_presentation, run_bokstedt, turn_page

__all__ = [
    "Dga", "builtin", "builtin_endomorphism_dga", "builtin_formal_polynomial", "builtin_Y2",
    "homology", "homology_ring", "mod_p_reduction", "tensor_dga", "truncate", "validate",
    "Generator", "GradedAlgebraPresentation", "cyclic_bar", "hh_cohomology_dims", "hh_dims",
    "hh_graded_closed_form", "bokstedt_pattern", "e_infinity_dims", "page_from_presentation",
    "run_bokstedt", "turn_page",
]
