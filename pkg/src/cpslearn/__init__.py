"""Score-based Bayesian network structure learning with CPS pruning."""

__version__ = "0.1.0"

from .dataset import Dataset, FamilyCounts, family_counts, load_dataset, loads_dataset
from .scoring import ScoredFamily, bdeu_local, score_all_families
from .cps import (ScoreTable, all_possible_cps, cps_stats, dumps_scores,
                  legal_filter, loads_scores, prune_percent, read_scores,
                  write_scores)
from .search import (Dag, Ordering, SearchConfig, best_net_for_order, exact_dp,
                     greedy_construct, is_acyclic, order_search)
from .experiment import (SweepReport, SweepRow, count_all_cps, dag_count, delta,
                         order_consistent_count, report_to_csv, report_to_text,
                         run_pruning_sweep)
from .errors import (CapacityError, CpsLearnError, InvalidFamilyError,
                     MalformedTableError, ParameterError, ParseError)

__all__ = [
    "__version__",
    "Dataset", "FamilyCounts", "family_counts", "load_dataset", "loads_dataset",
    "ScoredFamily", "bdeu_local", "score_all_families",
    "ScoreTable", "all_possible_cps", "cps_stats", "dumps_scores",
    "legal_filter", "loads_scores", "prune_percent", "read_scores", "write_scores",
    "Dag", "Ordering", "SearchConfig", "best_net_for_order", "exact_dp",
    "greedy_construct", "is_acyclic", "order_search",
    "SweepReport", "SweepRow", "count_all_cps", "dag_count", "delta",
    "order_consistent_count", "report_to_csv", "report_to_text", "run_pruning_sweep",
    "CapacityError", "CpsLearnError", "InvalidFamilyError",
    "MalformedTableError", "ParameterError", "ParseError",
]
