"""Equitable matroid base partitioning and matroid-constrained fair division."""

from .bitset import bits, ids_of, mask_of, popcount
from .brute import (
    EnumerationBudget,
    brute_ef1_exists,
    brute_equitable,
    brute_mms,
    enumerate_bases,
    enumerate_basis_partitions,
    exhaustive_rebalancing_exchange,
    matching_exchange_check,
)
from .errors import (
    BudgetExceededError,
    EquibaseError,
    InfeasibleError,
    InvariantViolationError,
    MalformedInputError,
    PreconditionError,
)
from .exchange import (
    ExchangeDigraph,
    ExchangeSet,
    apply_exchange,
    build_exchange_digraph,
    find_rebalancing_exchange,
    shortest_cycle_through,
    verify_exchangeable,
)
from .fairdiv import (
    FairDivisionInstance,
    bundle_value,
    cut_and_choose_ef1_two_agents,
    ef1_allocate_trivalued,
    ef1_check,
    ef1_violation,
    instance_from_doc,
    instance_to_doc,
    mms_allocate_bivalued,
    mms_threshold,
    mms_value_binary,
    normalize_valuation,
)
from .matroids import (
    CountingMatroid,
    GraphicMatroid,
    LinearGf2Matroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    fundamental_circuit,
    k4_matroid,
    matroid_from_doc,
    mutually_exchangeable,
    spot_check_axioms,
)
from .partition import (
    PartitionStats,
    check_two_set_conditions,
    equitable_partition,
    partition_into_k_bases,
    potentials,
    rebalance_partition,
    two_set_equitable_partition,
    validate_partition,
)

__version__ = "0.1.0"
