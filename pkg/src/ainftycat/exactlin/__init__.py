"""Exact scalars and sparse linear algebra."""

from .linalg import (
    KeyedCohomology,
    keyed_cohomology,
    ChainComplexData,
    Cohomology,
    Echelon,
    NotACocycle,
    NotAComplex,
    RrefResult,
    SparseMatrix,
    complex_cohomology,
    rank,
    rref,
    solve,
    vec_add,
    vec_axpy,
    vec_scale,
)
from .scalars import (
    Fraction,
    PrecisionExhausted,
    TruncLaurent,
    TruncSeries,
    as_fraction,
    format_rational,
    parse_rational,
    series_invert,
    valuation,
)

__all__ = [
    "ChainComplexData", "Cohomology", "Echelon", "Fraction", "NotACocycle",
    "NotAComplex", "PrecisionExhausted", "RrefResult", "SparseMatrix",
    "TruncLaurent", "TruncSeries", "as_fraction", "complex_cohomology",
    "format_rational", "parse_rational", "rank", "rref", "series_invert",
    "solve", "valuation", "vec_add", "vec_axpy", "vec_scale",
]
