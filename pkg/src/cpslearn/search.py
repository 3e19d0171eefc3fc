"""DAG search over retained candidate parent sets.

Three strategies share one input, a ranked :class:`~cpslearn.cps.ScoreTable`:

* ``greedy_construct`` -- one pass over nodes in order of their best local
  score, giving each node its best cycle-free candidate;
* ``order_search`` -- steepest-ascent hill climbing in the space of node
  orderings with an insertion-move neighborhood and seeded random restarts;
* ``exact_dp`` -- exact optimum over all DAGs representable in the table,
  via best-parent-set tables over variable subsets and a best-sink
  recursion (practical up to ~20 variables).

Parent sets are handled as bit masks (arbitrary-width ints), so node counts
are not limited by machine word size outside of ``exact_dp``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .cps import ScoreTable
from .errors import CapacityError, ParameterError

# Minimum score gain for a hill-climbing move to count as an improvement;
# guards against non-termination on float-noise "improvements".
IMPROVEMENT_TOL = 1e-9

DP_DEFAULT_CAP = 20

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph as one chosen parent set per node."""

    n_vars: int
    parent_choice: tuple[tuple[int, ...], ...]
    total_score: float


@dataclass(frozen=True)
class Ordering:
    """A permutation of node indices; parents must precede their child."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(len(perm))):
            raise ParameterError(f"not a permutation of 0..{len(perm) - 1}: {perm}")


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 20
    time_limit: float | None = None
    strategy: str = "order"

    def __post_init__(self):
        if self.restarts < 1:
            raise ParameterError(f"restarts must be >= 1, got {self.restarts}")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ParameterError(f"time_limit must be positive, got {self.time_limit}")
        if self.strategy not in ("greedy", "order", "exact"):
            raise ParameterError(f"unknown strategy {self.strategy!r}")


def is_acyclic(g: Dag) -> bool:
    """True iff a topological order of the chosen parent structure exists."""
    n = g.n_vars
    indeg = [len(ps) for ps in g.parent_choice]
    children: list[list[int]] = [[] for _ in range(n)]
    for v, ps in enumerate(g.parent_choice):
        for p in ps:
            children[p].append(v)
    queue = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for c in children[u]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen == n


def _ranked_masks(table: ScoreTable) -> list[list[tuple[int, float, tuple[int, ...]]]]:
    """Per node: ranked (parent bit mask, score, parents) triples."""
    out = []
    for node_entries in table.entries:
        lst = []
        for e in node_entries:
            m = 0
            for p in e.parents:
                m |= 1 << p
            lst.append((m, e.score, e.parents))
        out.append(lst)
    return out


def _first_consistent(ranked_v, pred_mask: int) -> tuple[float, tuple[int, ...]]:
    for m, s, ps in ranked_v:
        if m & ~pred_mask == 0:
            return s, ps
    raise AssertionError("validated tables always contain the empty set")


def greedy_construct(table: ScoreTable) -> Dag:
    """Give each node its best candidate that keeps the partial graph acyclic.

    Nodes are processed in descending order of their best candidate's score
    (ties by node index); a candidate is skipped when one of its parents is
    already reachable from the node, which is exactly when adding the family
    would close a cycle.  The empty set always qualifies, so construction
    never fails.
    """
    n = table.n_vars
    order = sorted(range(n), key=lambda v: (-table.entries[v][0].score, v))
    ranked = _ranked_masks(table)
    children: list[list[int]] = [[] for _ in range(n)]
    choice: list[tuple[int, ...]] = [()] * n
    total = 0.0
    for v in order:
        # Nodes reachable from v in the committed partial graph.
        reach = 0
        stack = [v]
        seen = {v}
        while stack:
            u = stack.pop()
            for c in children[u]:
                if c not in seen:
                    seen.add(c)
                    reach |= 1 << c
                    stack.append(c)
        for m, s, ps in ranked[v]:
            if m & reach == 0:
                choice[v] = ps
                total += s
                for p in ps:
                    children[p].append(v)
                break
    return Dag(n_vars=n, parent_choice=tuple(choice), total_score=total)


def best_net_for_order(table: ScoreTable, o: Ordering | Sequence[int]) -> Dag:
    """The exact optimum among networks consistent with the ordering.

    Each node receives its highest-ranked candidate whose parents all
    precede it; the first node always gets its best subset of {} (the empty
    set), so the result is acyclic by construction.
    """
    perm = o.perm if isinstance(o, Ordering) else Ordering(tuple(o)).perm
    n = table.n_vars
    if len(perm) != n:
        raise ParameterError(f"ordering length {len(perm)} != n_vars {n}")
    ranked = _ranked_masks(table)
    choice: list[tuple[int, ...]] = [()] * n
    total = 0.0
    pred = 0
    for v in perm:
        s, ps = _first_consistent(ranked[v], pred)
        choice[v] = ps
        total += s
        pred |= 1 << v
    return Dag(n_vars=n, parent_choice=tuple(choice), total_score=total)


class _OrderState:
    """Ordering plus per-position best choices, with incremental rescans.

    For each position t: ``perm[t]`` is the node, ``preds[t]`` the bit mask
    of nodes before it, ``idx[t]`` the index of its chosen entry in the
    node's ranked list, ``sc[t]`` that entry's score.  ``prefix_or[v][i]``
    is the OR of the masks of v's entries ranked above i, used to reject
    moves that cannot possibly improve a node without scanning.
    """

    def __init__(self, ranked, perm: list[int]):
        self.ranked = ranked
        n = len(perm)
        self.n = n
        self.prefix_or = []
        for lst in ranked:
            acc = 0
            pref = [0]
            for m, _, _ in lst:
                acc |= m
                pref.append(acc)
            self.prefix_or.append(pref)
        self.perm = list(perm)
        self.preds = [0] * n
        self.idx = [0] * n
        self.sc = [0.0] * n
        pred = 0
        for t, v in enumerate(perm):
            self.preds[t] = pred
            self.idx[t], self.sc[t] = self._scan(v, pred, 0)
            pred |= 1 << v

    def _scan(self, v: int, pred: int, start: int) -> tuple[int, float]:
        lst = self.ranked[v]
        for i in range(start, len(lst)):
            m, s, _ = lst[i]
            if m & ~pred == 0:
                return i, s
        raise AssertionError("empty set is always consistent")

    def total(self) -> float:
        return sum(self.sc)

    # -- move evaluation ---------------------------------------------------
    #
    # Moving the node at position a to position j shifts the span between
    # them by one and leaves every other relative order unchanged, so only
    # the moved node and the span nodes can change score:
    #   j < a: span nodes gain the moved node as a possible parent (score
    #          can only rise, and only if it appears in a better-ranked
    #          entry); the moved node loses the span (score can only drop).
    #   j > a: symmetric.

    def move_delta(self, a: int, j: int) -> float:
        perm, preds, idx, sc = self.perm, self.preds, self.idx, self.sc
        u = perm[a]
        bit_u = 1 << u
        delta = 0.0
        if j < a:
            # u loses the span as predecessors: entries ranked above its
            # current choice stay inconsistent, so resume the scan there.
            _, new_s = self._scan(u, preds[j], idx[a])
            delta += new_s - sc[a]
            for t in range(j, a):
                w = perm[t]
                # w gains u; only entries ranked above w's current choice
                # can improve it, and only if one of them uses u.
                if bit_u & self.prefix_or[w][idx[t]]:
                    _, s2 = self._scan(w, preds[t] | bit_u, 0)
                    delta += s2 - sc[t]
        else:
            gained = 0
            for t in range(a + 1, j + 1):
                gained |= 1 << perm[t]
            if gained & self.prefix_or[u][idx[a]]:
                _, new_s = self._scan(u, preds[a] | gained, 0)
                delta += new_s - sc[a]
            for t in range(a + 1, j + 1):
                w = perm[t]
                # w loses u; nothing changes unless u is in w's chosen set.
                if self.ranked[w][idx[t]][0] & bit_u:
                    _, s2 = self._scan(w, preds[t] & ~bit_u, idx[t])
                    delta += s2 - sc[t]
        return delta

    def apply_move(self, a: int, j: int) -> None:
        perm = self.perm
        u = perm.pop(a)
        perm.insert(j, u)
        # Only positions between the endpoints see a different predecessor
        # set; everything outside the span keeps its choice and score.
        lo, hi = (j, a) if j < a else (a, j)
        pred = self.preds[lo]
        for t in range(lo, hi + 1):
            self.preds[t] = pred
            pred |= 1 << perm[t]
        for t in range(lo, hi + 1):
            self.idx[t], self.sc[t] = self._scan(perm[t], self.preds[t], 0)


def _climb(state: _OrderState, deadline: float | None,
           clock: Callable[[], float],
           on_improve: Callable[[_OrderState], None]) -> None:
    """Steepest-ascent insertion moves until no neighbor improves.

    ``on_improve`` runs right after each applied move so the caller can
    stamp the moment a score level was first attained.
    """
    n = state.n
    while True:
        best_delta = IMPROVEMENT_TOL
        best_move = None
        for a in range(n):
            for j in range(n):
                if j == a:
                    continue
                if deadline is not None and clock() > deadline:
                    return
                d = state.move_delta(a, j)
                if d > best_delta:
                    best_delta = d
                    best_move = (a, j)
        if best_move is None:
            return
        state.apply_move(*best_move)
        on_improve(state)


def order_search(table: ScoreTable, cfg: SearchConfig,
                 clock: Callable[[], float] = time.perf_counter,
                 trace: list | None = None) -> tuple[Dag, float]:
    """Hill-climb node orderings from seeded random restarts.

    Returns the best network found and the wall-clock seconds (per ``clock``)
    at which its score was first attained.  Restart r draws its starting
    permutation from a generator seeded with ``seed XOR r``, so results are
    reproducible for a fixed seed, restart count and table when no time
    limit cuts the search short.  When ``trace`` is a list, every visited
    ordering is appended to it (debugging/reproducibility aid).
    """
    if cfg.strategy != "order":
        raise ParameterError(f"order_search requires strategy='order', got {cfg.strategy!r}")
    n = table.n_vars
    ranked = _ranked_masks(table)
    t0 = clock()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    best_total = -np.inf
    best_perm: list[int] | None = None
    t_best = 0.0

    def note(state: _OrderState) -> None:
        nonlocal best_total, best_perm, t_best
        if trace is not None:
            trace.append(tuple(state.perm))
        total = state.total()
        if total > best_total:
            best_total = total
            best_perm = list(state.perm)
            t_best = clock() - t0

    for r in range(cfg.restarts):
        rng = np.random.default_rng((cfg.seed ^ r) & _MASK64)
        perm = [int(v) for v in rng.permutation(n)]
        state = _OrderState(ranked, perm)
        note(state)
        _climb(state, deadline, clock, note)
        if deadline is not None and clock() > deadline:
            break
    dag = best_net_for_order(table, best_perm)
    return dag, t_best


def exact_dp(table: ScoreTable, cap: int = DP_DEFAULT_CAP) -> Dag:
    """Globally optimal network over all DAGs representable in the table.

    Builds, for every node, the best-candidate score over each subset of the
    remaining variables (a max-zeta transform over the subset lattice), then
    runs the best-sink recursion.  Memory and time grow as 2**n.
    """
    n = table.n_vars
    if n > cap:
        raise CapacityError(
            f"exact_dp cap is {cap} variables (got {n}); memory grows as 2^n"
        )
    size = 1 << n
    bps = np.full((n, size), -np.inf, dtype=np.float64)
    ranked = _ranked_masks(table)
    for v in range(n):
        for m, s, _ in ranked[v]:
            if s > bps[v, m]:
                bps[v, m] = s
    _kernels.zeta_max(bps)
    best, choice = _kernels.sink_dp(bps)

    parent_choice: list[tuple[int, ...]] = [()] * n
    mask = size - 1
    while mask:
        v = int(choice[mask])
        avail = mask ^ (1 << v)
        _, ps = _first_consistent(ranked[v], avail)
        parent_choice[v] = ps
        mask = avail
    # The DP total, not a re-summation: maxima over nested candidate sets
    # are then exactly monotone under pruning, not just up to rounding.
    return Dag(n_vars=n, parent_choice=tuple(parent_choice),
               total_score=float(best[size - 1]))
