"""Log BDeu local scores for (child, parent set) families.

The BDeu score of a family with child cardinality r, q joint parent
configurations, equivalent sample size ``ess`` and observed counts N_jk is

    sum_j [ lnG(a_j) - lnG(a_j + N_j) + sum_k ( lnG(a_jk + N_jk) - lnG(a_jk) ) ]

with a_j = ess/q and a_jk = ess/(q*r).  Scores are natural-log marginal
likelihoods; parent configurations absent from the data contribute zero and
are skipped, which keeps exhaustive enumeration tractable at bounded
in-degree on wide datasets.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .dataset import Dataset, _check_family
from .errors import ParameterError

DEFAULT_ESS = 1.0


@dataclass(frozen=True, slots=True)
class ScoredFamily:
    """One candidate parent set for one child, with its log BDeu score."""

    child: int
    parents: tuple[int, ...]  # sorted ascending, excludes child
    score: float


def _check_ess(ess: float) -> float:
    ess = float(ess)
    if not ess > 0.0:
        raise ParameterError(f"ess must be positive, got {ess}")
    return ess


def _family_batch(ds: Dataset, child: int, parent_sets: Sequence[tuple[int, ...]],
                  ess: float) -> np.ndarray:
    """Score a batch of parent sets for one child through the active kernel."""
    k_max = max((len(p) for p in parent_sets), default=0)
    n_fam = len(parent_sets)
    psets = np.full((n_fam, max(k_max, 1)), -1, dtype=np.int64)
    psizes = np.empty(n_fam, dtype=np.int64)
    for f, parents in enumerate(parent_sets):
        psizes[f] = len(parents)
        for j, p in enumerate(parents):
            psets[f, j] = p
    cards = np.asarray(ds.cardinalities, dtype=np.int64)
    return _kernels.score_families(ds.rows, cards, child, psets, psizes, ess)


def bdeu_local(ds: Dataset, child: int, parents: Iterable[int],
               ess: float = DEFAULT_ESS) -> float:
    """Log BDeu score of one family; finite for any valid family."""
    ess = _check_ess(ess)
    parents = _check_family(ds.n_vars, child, parents)
    score = float(_family_batch(ds, child, [parents], ess)[0])
    if not math.isfinite(score):  # lgamma of positive args is finite; guard anyway
        raise ArithmeticError(f"non-finite BDeu score for child {child}")
    return score


def _score_node(ds: Dataset, child: int, max_indeg: int, ess: float) -> list[ScoredFamily]:
    others = [v for v in range(ds.n_vars) if v != child]
    parent_sets: list[tuple[int, ...]] = []
    for k in range(max_indeg + 1):
        parent_sets.extend(combinations(others, k))
    scores = _family_batch(ds, child, parent_sets, ess)
    return [ScoredFamily(child=child, parents=ps, score=float(s))
            for ps, s in zip(parent_sets, scores)]


def score_all_families(ds: Dataset, max_indeg: int, ess: float = DEFAULT_ESS,
                       threads: int = 1) -> list[list[ScoredFamily]]:
    """Exhaustively score every parent set of size <= max_indeg for every node.

    Returns one list per node, each holding sum_{k<=max_indeg} C(n_vars-1, k)
    entries in canonical enumeration order (by size, then lexicographic).
    Assembly order is by node index regardless of thread interleaving.
    """
    ess = _check_ess(ess)
    if not 0 <= max_indeg < ds.n_vars:
        raise ParameterError(
            f"max_indeg must be in [0, {ds.n_vars - 1}], got {max_indeg}"
        )
    nodes = range(ds.n_vars)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda v: _score_node(ds, v, max_indeg, ess), nodes
            ))
        return results
    return [_score_node(ds, v, max_indeg, ess) for v in nodes]
