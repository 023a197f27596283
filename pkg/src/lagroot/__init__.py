"""Certified roots of polynomials with Gaussian-rational coefficients.

Roots are located by exact evaluation of the local inverse power series of
the polynomial and reported as exact binary digit expansions.
"""

from .errors import (
    InvariantError,
    LagrootError,
    NotRealRootError,
    OracleError,
    ParseError,
    PreconditionError,
)
from .exact import Dyadic, GaussianRational, parse_gaussian
from .inversion import (
    InversionConstants,
    SeriesContext,
    coefficient_tail_bound,
    compose_truncated,
    enumerate_indices,
    make_constants,
    make_context,
    partial_sum,
    series_coefficient,
)
from .locator import (
    CandidateList,
    SpiderwebSample,
    candidate_list,
    critical_chain,
    filtered_candidates,
)
from .oracle import OracleRoot, reference_roots
from .poly import (
    Poly,
    SquareFreeDecomposition,
    bit_size,
    cauchy_bounds,
    parse_poly,
    separation_bound,
    square_free_decompose,
)
from .rootfinder import (
    RootEntry,
    RootReport,
    StableRootTable,
    algebraic_bit,
    approximate_roots,
    digit_expansion,
    find_roots,
    stable_anchors,
)

__all__ = [
    "CandidateList",
    "Dyadic",
    "GaussianRational",
    "InvariantError",
    "InversionConstants",
    "LagrootError",
    "NotRealRootError",
    "OracleError",
    "OracleRoot",
    "ParseError",
    "Poly",
    "PreconditionError",
    "RootEntry",
    "RootReport",
    "SeriesContext",
    "SpiderwebSample",
    "SquareFreeDecomposition",
    "StableRootTable",
    "algebraic_bit",
    "approximate_roots",
    "bit_size",
    "candidate_list",
    "cauchy_bounds",
    "coefficient_tail_bound",
    "compose_truncated",
    "critical_chain",
    "digit_expansion",
    "enumerate_indices",
    "filtered_candidates",
    "find_roots",
    "make_constants",
    "make_context",
    "parse_gaussian",
    "parse_poly",
    "partial_sum",
    "reference_roots",
    "separation_bound",
    "series_coefficient",
    "square_free_decompose",
    "stable_anchors",
]

__version__ = "0.1.0"
