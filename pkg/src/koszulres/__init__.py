"""Koszul-type determinantal resultant matrices for star multilinear and
bipartite bilinear systems, with a multiparameter eigenvalue solver."""

from .blocks import (
    BlockStructure,
    Polynomial,
    PolySystem,
    make_system,
    mhb,
    monomial_basis,
    resultant_degree,
)
from .errors import (
    ArityError,
    DegenerateEigenvectorError,
    DeterminantalityError,
    KoszulError,
    ModeError,
    MultiplicityUnsupportedError,
    NotAffineError,
    ShapeError,
    SingularMEPError,
)
from .formulas import (
    BipartiteShape,
    DeterminantalData,
    F0Case,
    StarShape,
    bipartite_degree_vector,
    classify,
    enumerate_determinantal_data,
    star_degree_vector,
    star_matrix_size,
    star_solution_count,
    validate_bipartite_d0,
    validate_star_d0,
)
from .koszul import KoszulMatrix, assemble_delta1, enumerate_basis, inner_derivative, mu_apply
from .solver import (
    MEPEigenpair,
    MEPInstance,
    atkinson_delta_2ep,
    build_and_partition,
    det_exact,
    mep_to_system,
    recover_coordinates,
    resultant_vanishes,
    schur_complement,
    schur_eigen,
    solve_mep,
)
from .weyman import bott_factor, complex_terms, dual_degree_vector, is_determinantal

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "BipartiteShape",
    "BlockStructure",
    "DegenerateEigenvectorError",
    "DeterminantalData",
    "DeterminantalityError",
    "F0Case",
    "KoszulError",
    "KoszulMatrix",
    "MEPEigenpair",
    "MEPInstance",
    "ModeError",
    "MultiplicityUnsupportedError",
    "NotAffineError",
    "PolySystem",
    "Polynomial",
    "ShapeError",
    "SingularMEPError",
    "StarShape",
    "assemble_delta1",
    "atkinson_delta_2ep",
    "bipartite_degree_vector",
    "bott_factor",
    "build_and_partition",
    "classify",
    "complex_terms",
    "det_exact",
    "dual_degree_vector",
    "enumerate_basis",
    "enumerate_determinantal_data",
    "inner_derivative",
    "is_determinantal",
    "make_system",
    "mep_to_system",
    "mhb",
    "monomial_basis",
    "mu_apply",
    "recover_coordinates",
    "resultant_degree",
    "resultant_vanishes",
    "schur_complement",
    "schur_eigen",
    "solve_mep",
    "star_degree_vector",
    "star_matrix_size",
    "star_solution_count",
    "validate_bipartite_d0",
    "validate_star_d0",
]
