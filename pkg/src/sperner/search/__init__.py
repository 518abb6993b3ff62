"""Search engines and their kernel backends."""

from ._backend import BACKEND, kernels
from .engine import (
    CompRow,
    CompTable,
    EXACT_MAX_GROUND,
    ORACLE_MAX_GROUND,
    SearchConfig,
    SearchResult,
    TABLE_MAX_GROUND,
    anneal_max_product,
    anneal_max_sum,
    brute_force_max,
    enumerate_upsets,
    exact_max_product,
    exact_max_sum,
    min_comparability_table,
    resolve_threads,
)

__all__ = [
    "BACKEND",
    "CompRow",
    "CompTable",
    "EXACT_MAX_GROUND",
    "ORACLE_MAX_GROUND",
    "SearchConfig",
    "SearchResult",
    "TABLE_MAX_GROUND",
    "anneal_max_product",
    "anneal_max_sum",
    "brute_force_max",
    "enumerate_upsets",
    "exact_max_product",
    "exact_max_sum",
    "kernels",
    "min_comparability_table",
    "resolve_threads",
]
