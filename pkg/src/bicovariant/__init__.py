"""Exact verification of graded bicovariant brackets on SO(N) and Sp(N).

The classical side builds the twenty-parameter family of brackets on the
Cartan one-forms and checks nilpotency, Leibniz and Jacobi identities; the
quantum side builds the FRT R-matrix, the quadratic relation sets of the
bicovariant calculus, their first-order expansion in hbar and PBW probes.
"""
from .algebra import LaurentQ, MPoly, q_number
from .brackets import (
    BicovBracket,
    BracketParams,
    build_bracket,
    check_jacobi,
    check_leibniz,
    check_nilpotency,
    constrained_poisson_check,
    jai_identity,
    mu_extract,
)
from .grassmann import GeneratorBracket, GrassPoly
from .groups import GroupData, group_from_tag, standard_r
from .invariants import invariant_count, structure_rank, weyl_invariant_count
from .presets import PRESET_TAGS, appendix_preset
from .quantum import RMatrixData, RelationSet, build_rmatrix, pbw_probe, span_equal
from .semiclassical import extract_order_h_bracket, fgf_no_go, semiclassical_expand
from .tensors import SpaceTensor

__version__ = "0.1.0"

__all__ = [
    "BicovBracket", "BracketParams", "GeneratorBracket", "GrassPoly", "GroupData", "LaurentQ", "MPoly",
    "PRESET_TAGS", "RMatrixData", "RelationSet", "SpaceTensor", "appendix_preset", "build_bracket",
    "build_rmatrix", "check_jacobi", "check_leibniz", "check_nilpotency", "constrained_poisson_check",
    "extract_order_h_bracket", "fgf_no_go", "group_from_tag", "invariant_count", "jai_identity", "mu_extract", "pbw_probe",
    "q_number", "semiclassical_expand", "span_equal", "standard_r", "structure_rank", "weyl_invariant_count",
]
