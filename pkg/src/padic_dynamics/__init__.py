"""Exact dynamics of rational maps on the projective line over Q_p."""

from .decomposition import DecompositionReport, decompose, odometer_structure, periodic_length_check
from .dynamics import (
    Behaviour,
    CycleNode,
    analyze_cycle,
    build_level_system,
    check_minimal_at_level,
    check_minimal_levels,
    check_minimal_thm11,
    cycles_of,
    lift_cycle,
)
from .errors import PadicDynamicsError
from .p2criterion import check_criterion12, compute_terms, second_derivative_at0_of_cube
from .padic import PrimeContext, Residue, inv_mod, to_residue, valuation
from .projective import ProjectiveBall, ProjectivePoint, ball_of, enumerate_balls, spherical_distance
from .ratmap import RationalMap, has_good_reduction, reduce_mod_p, standardize
from .search import SearchSpec, classify_hits_by_orbit, run_search

__all__ = [
    "Behaviour",
    "CycleNode",
    "DecompositionReport",
    "PadicDynamicsError",
    "PrimeContext",
    "ProjectiveBall",
    "ProjectivePoint",
    "RationalMap",
    "Residue",
    "SearchSpec",
    "analyze_cycle",
    "ball_of",
    "build_level_system",
    "check_criterion12",
    "check_minimal_at_level",
    "check_minimal_levels",
    "check_minimal_thm11",
    "classify_hits_by_orbit",
    "compute_terms",
    "cycles_of",
    "decompose",
    "enumerate_balls",
    "has_good_reduction",
    "inv_mod",
    "lift_cycle",
    "odometer_structure",
    "periodic_length_check",
    "reduce_mod_p",
    "run_search",
    "second_derivative_at0_of_cube",
    "spherical_distance",
    "standardize",
    "to_residue",
    "valuation",
]
