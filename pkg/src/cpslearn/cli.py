"""Command-line front end: score, prune, learn, sweep, stats, count.

Results go to files or standard output; diagnostics go to standard error.
Exit codes: 0 success, 1 file/data errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .cps import (ScoreTable, cps_stats, legal_filter, read_scores,
                  write_scores)
from .dataset import load_dataset
from .errors import CpsLearnError
from .experiment import (count_all_cps, dag_count, order_consistent_count,
                         report_to_csv, report_to_text, run_pruning_sweep)
from .scoring import score_all_families
from .search import SearchConfig, exact_dp, greedy_construct, order_search


def _virtual_clock():
    # Deterministic stand-in for the wall clock: reproducibility checks need
    # byte-identical outputs, which real timing cannot provide.
    return 0.0


def _pick_clock(args) -> object:
    return _virtual_clock if getattr(args, "virtual_clock", False) else time.perf_counter


def _default_threads() -> int:
    env = os.environ.get("CPSLEARN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_search_args(sub, with_out=True):
    sub.add_argument("--strategy", choices=("greedy", "order", "exact"),
                     default="order", help="search strategy (default: order)")
    sub.add_argument("--seed", type=int, default=0,
                     help="RNG seed for order search restarts (default: 0)")
    sub.add_argument("--restarts", type=int, default=20,
                     help="order-search restarts (default: 20)")
    sub.add_argument("--time-limit", type=float, default=None, metavar="SECS",
                     help="cooperative wall-clock limit for order search")
    sub.add_argument("--virtual-clock", action="store_true",
                     help="report deterministic zero timings (for reproducibility checks)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpslearn",
        description="Bayesian network structure learning over pruned candidate parent sets",
    )
    parser.add_argument("--version", action="version", version=f"cpslearn {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_score = subs.add_parser("score", help="generate a BDeu score file from data")
    p_score.add_argument("--data", required=True, help="delimited text dataset with header")
    p_score.add_argument("--max-indeg", type=int, default=3,
                         help="maximum parent-set size (default: 3)")
    p_score.add_argument("--ess", type=float, default=1.0,
                         help="equivalent sample size (default: 1.0)")
    p_score.add_argument("--out", required=True, help="output score file")
    p_score.add_argument("--no-legal-filter", action="store_true",
                         help="keep dominated parent sets instead of pruning them")
    p_score.add_argument("--delimiter", choices=("comma", "whitespace"),
                         default="comma", help="dataset delimiter (default: comma)")
    p_score.add_argument("--threads", type=int, default=_default_threads(),
                         help="worker threads for per-node scoring")

    p_prune = subs.add_parser("prune", help="drop a bottom percentage of each node's CPSs")
    p_prune.add_argument("--scores", required=True, help="input score file")
    p_prune.add_argument("--percent", type=int, required=True,
                         help="percentage to prune, integer in [0, 99]")
    p_prune.add_argument("--out", required=True, help="output score file")

    p_learn = subs.add_parser("learn", help="search for a high-scoring DAG")
    p_learn.add_argument("--scores", required=True, help="input score file")
    _add_search_args(p_learn)
    p_learn.add_argument("--out", help="DAG output file (omit to print only the score)")

    p_sweep = subs.add_parser("sweep", help="rerun a search across pruning levels")
    p_sweep.add_argument("--scores", required=True, help="input score file")
    p_sweep.add_argument("--levels", required=True,
                         help="comma-separated pruning percentages, must include 0")
    _add_search_args(p_sweep)
    p_sweep.add_argument("--out", required=True, metavar="PREFIX",
                         help="writes PREFIX.csv and PREFIX.txt")

    p_stats = subs.add_parser("stats", help="retained-CPS counts and rates")
    p_stats.add_argument("--scores", required=True, help="input score file")
    p_stats.add_argument("--max-indeg", type=int, default=3,
                         help="in-degree bound defining the all-possible total (default: 3)")

    p_count = subs.add_parser("count", help="exact combinatorial counts")
    group = p_count.add_mutually_exclusive_group(required=True)
    group.add_argument("--dags", type=int, metavar="N",
                       help="labeled DAGs on N nodes")
    group.add_argument("--orders", type=int, metavar="N",
                       help="DAGs consistent with one ordering of N nodes")
    group.add_argument("--cps", metavar="N,K",
                       help="parent sets of size <= K over N nodes")
    return parser


def _search_config(args) -> SearchConfig:
    return SearchConfig(seed=args.seed, restarts=args.restarts,
                        time_limit=args.time_limit, strategy=args.strategy)


def _learn_once(table: ScoreTable, cfg: SearchConfig, clock):
    if cfg.strategy == "order":
        return order_search(table, cfg, clock=clock)
    t0 = clock()
    dag = exact_dp(table) if cfg.strategy == "exact" else greedy_construct(table)
    return dag, clock() - t0


def _write_dag(dag, names, out_path: str) -> None:
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        for v, parents in enumerate(dag.parent_choice):
            f.write(f"{names[v]} <- {' '.join(names[p] for p in parents)}".rstrip() + "\n")
        f.write(f"# score {dag.total_score:.6f}\n")


def _cmd_score(args) -> int:
    delim = "," if args.delimiter == "comma" else None
    ds = load_dataset(args.data, delimiter=delim)
    print(f"scoring {ds.n_vars} variables x {ds.n_rows} rows "
          f"(max-indeg {args.max_indeg}, ess {args.ess})", file=sys.stderr)
    entries = score_all_families(ds, args.max_indeg, ess=args.ess,
                                 threads=args.threads)
    table = ScoreTable(ds.names, entries)
    raw_total = table.total_cps()
    if not args.no_legal_filter:
        table = legal_filter(table)
        print(f"legality pruning kept {table.total_cps()} of {raw_total} CPSs",
              file=sys.stderr)
    write_scores(table, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_prune(args) -> int:
    from .cps import prune_percent
    table = read_scores(args.scores)
    pruned = prune_percent(table, args.percent)
    write_scores(pruned, args.out)
    print(f"kept {pruned.total_cps()} of {table.total_cps()} CPSs", file=sys.stderr)
    return 0


def _cmd_learn(args) -> int:
    table = read_scores(args.scores)
    cfg = _search_config(args)
    dag, t_best = _learn_once(table, cfg, _pick_clock(args))
    if args.out:
        _write_dag(dag, table.names, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    print(f"time to best: {t_best:.3f}s", file=sys.stderr)
    print(f"{dag.total_score:.6f}")
    return 0


def _cmd_sweep(args) -> int:
    table = read_scores(args.scores)
    try:
        levels = [int(tok) for tok in args.levels.split(",") if tok.strip() != ""]
    except ValueError:
        raise CpsLearnError(f"bad --levels value {args.levels!r}")
    cfg = _search_config(args)
    report = run_pruning_sweep(table, levels, cfg, clock=_pick_clock(args))
    csv_path, txt_path = args.out + ".csv", args.out + ".txt"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(report_to_csv(report))
    with open(txt_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(report_to_text(report))
    print(f"wrote {csv_path} and {txt_path}", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    table = read_scores(args.scores)
    total, per_node, rate = cps_stats(table, table.n_vars, args.max_indeg)
    print(f"variables: {table.n_vars}")
    print(f"retained CPSs: {total}")
    print(f"per node: {per_node:.2f}")
    print(f"rate vs all possible at max-indeg {args.max_indeg}: {rate * 100:.1f}%")
    return 0


def _cmd_count(args) -> int:
    if args.dags is not None:
        print(dag_count(args.dags))
    elif args.orders is not None:
        print(order_consistent_count(args.orders))
    else:
        try:
            n_s, k_s = args.cps.split(",")
            n, k = int(n_s), int(k_s)
        except ValueError:
            raise CpsLearnError(f"--cps expects 'N,K', got {args.cps!r}")
        print(count_all_cps(n, k))
    return 0


_COMMANDS = {
    "score": _cmd_score,
    "prune": _cmd_prune,
    "learn": _cmd_learn,
    "sweep": _cmd_sweep,
    "stats": _cmd_stats,
    "count": _cmd_count,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CpsLearnError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
