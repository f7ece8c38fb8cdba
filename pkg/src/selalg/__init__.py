"""Exact algebra for rank-based selection schemes.

Converts between probabilistic tournament selection and polynomial rank
selection with exact rational arithmetic, decides when a polynomial scheme
is tournament-representable, enumerates the valid-quadratic polytope, and
verifies executable samplers against their exact distributions.
"""

from .exactnum import (
    Rational,
    RationalMatrix,
    binomial,
    format_rational,
    mat_mul,
    mat_vec,
    parse_rational,
    power_sum,
    stirling_first,
)
from .selmat import MatrixZoo, build_zoo, deterministic_pmf, seed_rank_pmf
from .schemes import (
    RankPolynomial,
    SelectionPMF,
    TournamentRejection,
    TournamentScheme,
    complete_top_coefficient,
    effective_pmf_with_ties,
    lagrange_coefficients,
    linear_rank_bounds,
    linear_tournament_bounds,
    polynomial_to_tournament,
    scheme_pmf,
    tournament_to_polynomial,
    validate_pmf,
)
from .geometry import (
    CoverageEstimate,
    PolytopeVertex,
    classify_quadratic,
    coverage_estimate,
    monotonicity_boundaries,
    quadratic_polytope_vertices,
    tournament_simplex_corners,
)
from .sampling import (
    EmpiricalPMF,
    Rng,
    brute_force_seed_pmf,
    empirical_pmf,
    sample_rank_winner,
    sample_tournament_winner,
    tv_distance,
)

__version__ = "0.1.0"

__all__ = [
    "CoverageEstimate",
    "EmpiricalPMF",
    "MatrixZoo",
    "PolytopeVertex",
    "RankPolynomial",
    "Rational",
    "RationalMatrix",
    "Rng",
    "SelectionPMF",
    "TournamentRejection",
    "TournamentScheme",
    "binomial",
    "brute_force_seed_pmf",
    "build_zoo",
    "classify_quadratic",
    "complete_top_coefficient",
    "coverage_estimate",
    "deterministic_pmf",
    "effective_pmf_with_ties",
    "empirical_pmf",
    "format_rational",
    "lagrange_coefficients",
    "linear_rank_bounds",
    "linear_tournament_bounds",
    "mat_mul",
    "mat_vec",
    "monotonicity_boundaries",
    "parse_rational",
    "polynomial_to_tournament",
    "power_sum",
    "quadratic_polytope_vertices",
    "sample_rank_winner",
    "sample_tournament_winner",
    "scheme_pmf",
    "seed_rank_pmf",
    "stirling_first",
    "tournament_simplex_corners",
    "tournament_to_polynomial",
    "validate_pmf",
]
