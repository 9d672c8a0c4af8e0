"""Homogeneous weights and matrix product codes over finite principal ideal rings."""

__version__ = "0.1.0"

from .chain_ring import ChainRing, make_chain_ring, parse_chain_ring
from .codes import Code, dual, is_nested, materialize, min_distance
from .homweight import hom_weight, weight_and_distance, weight_bounds
from .mpc import (
    build_counterexample,
    hypothesis_check,
    matrix_product,
    partial_bound_property,
    rowspan_hamming,
    theorem_bound,
    verify_dual,
    verify_theorem,
)
from .pir import Pir, parse_pir, pir_from_chain_rings, pir_from_modulus
from .ringmatrix import RingMatrix, build_nsc, cput_check, det, inverse, is_nsc

__all__ = [
    "ChainRing",
    "Code",
    "Pir",
    "RingMatrix",
    "build_counterexample",
    "build_nsc",
    "cput_check",
    "det",
    "dual",
    "hom_weight",
    "hypothesis_check",
    "inverse",
    "is_nested",
    "is_nsc",
    "make_chain_ring",
    "materialize",
    "matrix_product",
    "min_distance",
    "parse_chain_ring",
    "parse_pir",
    "partial_bound_property",
    "pir_from_chain_rings",
    "pir_from_modulus",
    "rowspan_hamming",
    "theorem_bound",
    "verify_dual",
    "verify_theorem",
    "weight_and_distance",
    "weight_bounds",
]
