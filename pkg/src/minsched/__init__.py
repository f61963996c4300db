"""Minimum-length link scheduling for interference-limited wireless networks.

The toolkit models links whose rates depend only on their length
cluster and on how many links of each cluster transmit at once, and
provides: a brute-force LP oracle, a polynomial-size dual certificate,
column generation, per-cluster decomposition, and lower/upper bounds
with a replay-based improvement, plus instance generation and the
experiment harness behind the ``minsched`` CLI.
"""

from .bounds import (BoundsReport, approximate_solve, bound_pair,
                     compute_bounds, improve_upper)
from .clustering import Clustering, IterationLimitError, cluster_radii, kmeans
from .colgen import PricingResult, RestrictedMaster, colgen_solve, price, run_colgen
from .decomposition import (DecompositionReport, analyze_decomposition,
                            check_intra_dominance, check_singleton_dominance,
                            decomposed_solve, sum_rate)
from .dual_reduce import ReducedDual, build_reduced_dual, reduced_dual_solve
from .lp_core import (LpProblem, LpSolution, LpStatus, SolverStallError)
from .netmodel import (Instance, RateTable, RateVariant, TableRates, TrueRates,
                       build_rate_table, channel_gain, dbm_to_watts,
                       generate_instance, load_instance, profile_of,
                       save_instance, shannon_rate, true_link_rate,
                       watts_to_dbm)
from .oracle import (BRUTE_FORCE_CAP, Schedule, ScheduleEntry,
                     brute_force_solve, build_full_lp, simulate_schedule)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_CAP", "BoundsReport", "Clustering", "DecompositionReport",
    "Instance", "IterationLimitError", "LpProblem", "LpSolution", "LpStatus",
    "PricingResult", "RateTable", "RateVariant", "ReducedDual",
    "RestrictedMaster", "Schedule", "ScheduleEntry", "SolverStallError",
    "TableRates", "TrueRates", "analyze_decomposition", "approximate_solve",
    "bound_pair", "brute_force_solve", "build_full_lp", "build_rate_table",
    "build_reduced_dual", "channel_gain", "check_intra_dominance",
    "check_singleton_dominance", "cluster_radii", "colgen_solve",
    "compute_bounds", "dbm_to_watts", "decomposed_solve", "generate_instance",
    "improve_upper", "kmeans", "load_instance", "price", "profile_of",
    "reduced_dual_solve", "run_colgen", "save_instance", "shannon_rate",
    "simulate_schedule", "sum_rate", "true_link_rate", "watts_to_dbm",
]
