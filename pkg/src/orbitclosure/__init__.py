"""Orbit closures of rational self-maps via truncated vanishing ideals."""

from .dynsys import OrbitSample, SelfMap, SemigroupSpec, orbit_sample, symbolic_iterates, word_map
from .exactla import GF, QQ, Matrix, PrimeField, minor_det, nullspace, rank, rref
from .generic import (
    check_forward_invariance,
    exceptional_generators,
    generic_matrix,
    generic_rank,
    is_exceptional,
)
from .invariants import density_evidence, poly_invariants, verify_rational_invariant
from .parser import parse_expr, parse_point, parse_poly, parse_system
from .poly import Poly, RatFunc, compose
from .separator import Outcome, check_phi_invariance, fiber_check, phi_proxy, separate
from .vanish import hilbert_profile, stabilized_ideal, truncated_ideal

__version__ = "0.1.0"

__all__ = [
    "GF",
    "Matrix",
    "OrbitSample",
    "Outcome",
    "Poly",
    "PrimeField",
    "QQ",
    "RatFunc",
    "SelfMap",
    "SemigroupSpec",
    "check_forward_invariance",
    "check_phi_invariance",
    "compose",
    "density_evidence",
    "exceptional_generators",
    "fiber_check",
    "generic_matrix",
    "generic_rank",
    "hilbert_profile",
    "is_exceptional",
    "minor_det",
    "nullspace",
    "orbit_sample",
    "parse_expr",
    "parse_point",
    "parse_poly",
    "parse_system",
    "phi_proxy",
    "poly_invariants",
    "rank",
    "rref",
    "separate",
    "stabilized_ideal",
    "symbolic_iterates",
    "truncated_ideal",
    "verify_rational_invariant",
    "word_map",
]
