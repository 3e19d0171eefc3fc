"""Pruning-sweep experiments, the score-loss metric and counting utilities.

A sweep prunes a ranked table at each requested percentage, reruns the same
configured search (same seed, same limits) on every pruned table, and
reports the retained candidate counts, the best score, the relative loss

    delta = (S* - S) / S*

against the unpruned baseline S*, and the time at which the best score was
first attained.  With log scores negative, a worse fit gives delta < 0.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cps import ScoreTable, prune_percent
from .errors import ParameterError
from .search import Dag, SearchConfig, exact_dp, greedy_construct, order_search


def delta(s_star: float, s: float) -> float:
    """Relative score discrepancy (S* - S) / S*; 0 when the scores agree."""
    if s_star == 0:
        raise ZeroDivisionError("baseline score is zero")
    return (s_star - s) / s_star + 0.0  # +0.0 normalizes -0.0


def dag_count(n: int) -> int:
    """Exact number of labeled DAGs on n nodes (Robinson's recurrence)."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    f = [1]
    for m in range(1, n + 1):
        total = 0
        for i in range(1, m + 1):
            term = math.comb(m, i) * (1 << (i * (m - i))) * f[m - i]
            total += term if i % 2 else -term
        f.append(total)
    return f[n]


def order_consistent_count(n: int) -> int:
    """Number of DAGs consistent with one fixed node ordering: 2^(n(n-1)/2)."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return 1 << (n * (n - 1) // 2)


def count_all_cps(n: int, k: int) -> int:
    """Candidate parent sets of size <= k over n nodes: n * sum_j C(n-1, j)."""
    if not 0 <= k < n:
        raise ParameterError(f"max in-degree must be in [0, {n - 1}], got {k}")
    return n * sum(math.comb(n - 1, j) for j in range(k + 1))


@dataclass(frozen=True)
class SweepRow:
    p: int
    cps_graph: int
    cps_per_node: float
    score: float
    delta: float
    time_to_best_s: float
    anomalous: bool = False  # pruned score beat the baseline (heuristic search)


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    baseline_score: float
    config: dict = field(default_factory=dict)


def _run_strategy(table: ScoreTable, cfg: SearchConfig,
                  clock: Callable[[], float]) -> tuple[Dag, float]:
    if cfg.strategy == "order":
        return order_search(table, cfg, clock=clock)
    t0 = clock()
    if cfg.strategy == "exact":
        dag = exact_dp(table)
    elif cfg.strategy == "greedy":
        dag = greedy_construct(table)
    else:
        raise ParameterError(f"unknown strategy {cfg.strategy!r}")
    return dag, clock() - t0


def run_pruning_sweep(table: ScoreTable, levels: Sequence[int], cfg: SearchConfig,
                      clock: Callable[[], float] = time.perf_counter,
                      config_echo: dict | None = None) -> SweepReport:
    """Prune at each level, rerun the same search, and report score losses.

    ``levels`` must contain 0; the baseline runs first and every level runs
    the identical configuration, so the delta column isolates the effect of
    pruning rather than search variance.  Rows come out in ascending level
    order.  Levels run sequentially to keep the timing column comparable.
    """
    levels = sorted(set(int(p) for p in levels))
    if 0 not in levels:
        raise ParameterError("pruning levels must include the 0% baseline")
    n = table.n_vars

    baseline_dag, baseline_t = _run_strategy(table, cfg, clock)
    s_star = baseline_dag.total_score

    rows = []
    for p in levels:
        if p == 0:
            pruned, dag, t = table, baseline_dag, baseline_t
        else:
            pruned = prune_percent(table, p)
            dag, t = _run_strategy(pruned, cfg, clock)
        total_cps = pruned.total_cps()
        d = delta(s_star, dag.total_score)
        anomalous = d > 0
        if anomalous:
            print(
                f"warning: pruned search at {p}% beat the baseline "
                f"(delta={d:.6g}); possible under heuristic search",
                file=sys.stderr,
            )
        rows.append(SweepRow(
            p=p, cps_graph=total_cps, cps_per_node=total_cps / n,
            score=dag.total_score, delta=d, time_to_best_s=t,
            anomalous=anomalous,
        ))

    echo = dict(config_echo or {})
    echo.setdefault("seed", cfg.seed)
    echo.setdefault("restarts", cfg.restarts)
    echo.setdefault("strategy", cfg.strategy)
    echo.setdefault("time_limit", cfg.time_limit)
    return SweepReport(rows=tuple(rows), baseline_score=s_star, config=echo)


def report_to_csv(report: SweepReport) -> str:
    """Machine-readable rendering; delta stays a raw ratio."""
    lines = ["p,cps_graph,cps_per_node,score,delta,time_to_best_s"]
    for r in report.rows:
        lines.append(
            f"{r.p},{r.cps_graph},{r.cps_per_node:.2f},{r.score:.6f},"
            f"{r.delta!r},{r.time_to_best_s:.3f}"
        )
    return "\n".join(lines) + "\n"


def report_to_text(report: SweepReport) -> str:
    """Aligned table with the loss shown in per-mille, like the CSV's twin."""
    header = ("Pruning", "CPSs (graph)", "CPSs (per node)", "Delta", "Time (secs)")
    body = []
    for r in report.rows:
        mark = " !" if r.anomalous else ""
        body.append((
            f"{r.p}%",
            f"{r.cps_graph}",
            f"{r.cps_per_node:.2f}",
            f"{r.delta * 1000:.3f}‰{mark}",
            f"{r.time_to_best_s:.3f}",
        ))
    widths = [max(len(header[i]), *(len(row[i]) for row in body)) for i in range(5)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for row in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    lines.append("")
    lines.append(f"baseline score: {report.baseline_score:.6f}")
    if report.config:
        echo = ", ".join(f"{k}={v}" for k, v in sorted(report.config.items()))
        lines.append(f"config: {echo}")
    return "\n".join(lines) + "\n"
