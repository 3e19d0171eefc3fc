"""Benchmark the numba kernels against their pure-numpy fallbacks.

Usage: python benchmarks/bench_kernels.py [--rows N] [--vars N] [--dp-n N]

Times the two hot paths on synthetic inputs:
  * family scoring: every parent set up to size 3 for one child node;
  * exact-DP passes: subset max-zeta transform plus the best-sink recursion.
JIT compilation happens in an untimed warmup call.
"""

import argparse
import time
from itertools import combinations

import numpy as np

from cpslearn import _kernels


def make_score_inputs(rng, n_vars, n_rows, max_card=4, max_indeg=3):
    data = np.stack(
        [rng.integers(0, int(c), size=n_rows)
         for c in rng.integers(2, max_card + 1, size=n_vars)],
        axis=1,
    ).astype(np.int32)
    cards = (data.max(axis=0) + 1).astype(np.int64)
    child = 0
    others = list(range(1, n_vars))
    psets_list = [ps for k in range(max_indeg + 1) for ps in combinations(others, k)]
    psets = np.full((len(psets_list), max_indeg), -1, dtype=np.int64)
    psizes = np.zeros(len(psets_list), dtype=np.int64)
    for i, ps in enumerate(psets_list):
        psizes[i] = len(ps)
        psets[i, : len(ps)] = ps
    return data, cards, child, psets, psizes


def make_dp_inputs(rng, n):
    size = 1 << n
    bps = np.full((n, size), -np.inf)
    for v in range(n):
        bps[v, 0] = -float(rng.uniform(10, 50))
        masks = rng.integers(0, size, size=200)
        masks = masks[(masks >> v) & 1 == 0]
        bps[v, masks] = -rng.uniform(10, 50, size=masks.shape[0])
    return bps


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=4000)
    ap.add_argument("--vars", type=int, default=24)
    ap.add_argument("--dp-n", type=int, default=16)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    data, cards, child, psets, psizes = make_score_inputs(rng, args.vars, args.rows)
    n_fam = psets.shape[0]
    print(f"scoring: {n_fam} parent sets x {args.rows} rows ({args.vars} vars)")

    results = []
    t_np = timeit(lambda: _kernels._score_families_numpy(
        data, cards, child, psets, psizes, 1.0))
    results.append(("score_families", "numpy", t_np))
    if _kernels.NUMBA_ENABLED:
        _kernels._score_families_numba(data, cards, child, psets[:2], psizes[:2], 1.0)
        t_nb = timeit(lambda: _kernels._score_families_numba(
            data, cards, child, psets, psizes, 1.0))
        results.append(("score_families", "numba", t_nb))
        ref = _kernels._score_families_numpy(data, cards, child, psets, psizes, 1.0)
        got = _kernels._score_families_numba(data, cards, child, psets, psizes, 1.0)
        assert np.allclose(ref, got, rtol=1e-12), "kernel paths disagree"

    bps = make_dp_inputs(rng, args.dp_n)
    print(f"exact-DP passes: n={args.dp_n} ({1 << args.dp_n} subsets)")

    def dp_numpy():
        b = bps.copy()
        _kernels._zeta_max_numpy(b)
        _kernels._sink_dp_numpy(b)

    results.append(("zeta+sink_dp", "numpy", timeit(dp_numpy)))
    if _kernels.NUMBA_ENABLED:
        warm = make_dp_inputs(rng, 4)
        _kernels._zeta_max_numba(warm)
        _kernels._sink_dp_numba(warm)

        def dp_numba():
            b = bps.copy()
            _kernels._zeta_max_numba(b)
            _kernels._sink_dp_numba(b)

        results.append(("zeta+sink_dp", "numba", timeit(dp_numba)))

    print()
    print(f"{'kernel':<16}{'path':<8}{'best of 3':>12}{'speedup':>10}")
    base = {}
    for kernel, path, t in results:
        if path == "numpy":
            base[kernel] = t
        speed = f"{base[kernel] / t:.1f}x" if path != "numpy" else "1.0x"
        print(f"{kernel:<16}{path:<8}{t:>11.3f}s{speed:>10}")
    if not _kernels.NUMBA_ENABLED:
        print("\nnumba path unavailable (CPSLEARN_NUMBA=0 or numba not installed)")


if __name__ == "__main__":
    main()
