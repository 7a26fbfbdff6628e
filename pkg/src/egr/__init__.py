"""Finite Euclidean configurations with verifiable color-forcing structure.

The package builds, in explicit coordinates, point gadgets whose
congruent sub-simplices constrain colorings (perturbed triangles,
sphere chains, simplex-times-path products, perturbation grids,
conditioned tetrahedra) and checks the forcing properties themselves,
that every coloring admits a monochromatic copy of one simplex or a
rainbow copy of another, by exhaustive or backtracking search.
"""

from .geometry import (
    Configuration,
    ConstraintViolation,
    DEFAULT_TOL,
    GeometryError,
    NonRealizableError,
    SimplexSpec,
    ToleranceConfig,
    cayley_menger_volume,
    congruence_check,
    embed_from_distances,
    enumerate_copies,
    squared_distance,
)

__all__ = [
    "Configuration",
    "ConstraintViolation",
    "DEFAULT_TOL",
    "GeometryError",
    "NonRealizableError",
    "SimplexSpec",
    "ToleranceConfig",
    "cayley_menger_volume",
    "congruence_check",
    "embed_from_distances",
    "enumerate_copies",
    "squared_distance",
]
