"""Cross-Sperner set systems: tuples of non-empty families in the
subset lattice of [n] with no containment between sets of different
families.  Constructions, closed-form bounds, exact and heuristic
search for the largest sum and product of family sizes, minimum
comparability tables, and a JSON witness format."""

from .bounds import (
    BoundId,
    BoundValue,
    bounds_report,
    eval_bound,
    min_ground_for_antichain,
    render_value,
)
from .constructions import (
    PrefixParams,
    ProductParams,
    SumParams,
    build_pair_product,
    build_pair_sum,
    build_prefix_tuple,
    build_product_tuple,
    build_sum_tuple,
)
from .errors import (
    BudgetExhausted,
    SpernerError,
    WitnessFormatError,
)
from .lattice import (
    MAX_GROUND,
    Family,
    FamilyTuple,
    closure,
    colex_initial_segment,
    comparability_number,
    comparable,
    convex_hull,
    elements_of_mask,
    hk_check,
    incomparable_complement,
    is_antichain,
    is_cross_sperner,
    is_downward_closed,
    is_upward_closed,
    mask_from_elements,
    merge_partition,
)
from .search import (
    BACKEND,
    CompRow,
    CompTable,
    SearchConfig,
    SearchResult,
    anneal_max_product,
    anneal_max_sum,
    brute_force_max,
    exact_max_product,
    exact_max_sum,
    min_comparability_table,
)
from .witness import (
    check_witness,
    dumps_witness,
    load_witness,
    parse_witness,
    tuple_of_witness,
    witness_payload,
    write_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundId",
    "BoundValue",
    "BudgetExhausted",
    "CompRow",
    "CompTable",
    "Family",
    "FamilyTuple",
    "MAX_GROUND",
    "PrefixParams",
    "ProductParams",
    "SearchConfig",
    "SearchResult",
    "SpernerError",
    "SumParams",
    "WitnessFormatError",
    "anneal_max_product",
    "anneal_max_sum",
    "bounds_report",
    "brute_force_max",
    "build_pair_product",
    "build_pair_sum",
    "build_prefix_tuple",
    "build_product_tuple",
    "build_sum_tuple",
    "check_witness",
    "closure",
    "colex_initial_segment",
    "comparability_number",
    "comparable",
    "convex_hull",
    "dumps_witness",
    "elements_of_mask",
    "eval_bound",
    "exact_max_product",
    "exact_max_sum",
    "hk_check",
    "incomparable_complement",
    "is_antichain",
    "is_cross_sperner",
    "is_downward_closed",
    "is_upward_closed",
    "load_witness",
    "mask_from_elements",
    "merge_partition",
    "min_comparability_table",
    "min_ground_for_antichain",
    "parse_witness",
    "render_value",
    "tuple_of_witness",
    "witness_payload",
    "write_witness",
]
