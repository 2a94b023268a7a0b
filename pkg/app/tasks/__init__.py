"""Celery tasks package."""
from app.tasks.verification_tasks import (
    biderivation_oracle,
    biderivation_row,
    decomposition,
    dense_derivations,
    derivation_row,
    gamma_gap,
    degree_zero_cohomology,
    degree_zero_homs,
    get_algebra,
    nonzero_degree_row,
    postlie_row,
    quotient_endomorphisms,
    quotient_row,
    semisimple_base,
)

__all__ = [
    "biderivation_oracle",
    "biderivation_row",
    "decomposition",
    "dense_derivations",
    "derivation_row",
    "gamma_gap",
    "degree_zero_cohomology",
    "degree_zero_homs",
    "get_algebra",
    "nonzero_degree_row",
    "postlie_row",
    "quotient_endomorphisms",
    "quotient_row",
    "semisimple_base",
]
