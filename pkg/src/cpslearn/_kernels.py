"""Hot numeric kernels with numba-accelerated and pure-numpy implementations.

Two kernel families live here:

* ``score_families`` -- batched BDeu local scores for all candidate parent
  sets of one child node (the inner loop of score generation);
* ``zeta_max`` / ``sink_dp`` -- the subset-lattice passes of the exact
  dynamic-programming solver.

Each kernel has a ``_numba`` variant compiled with ``@njit`` and a
``_numpy`` fallback.  The active path is chosen at import time: set
``CPSLEARN_NUMBA=0`` (or ``false``/``off``) to force the fallback, e.g. for
debugging or on platforms without numba.  Both paths produce identical
results (the DP passes bit-for-bit; the scoring path up to libm lgamma
differences, well below 1e-12 relative).
"""

from __future__ import annotations

import math
import os

import numpy as np


def _env_wants_numba() -> bool:
    return os.environ.get("CPSLEARN_NUMBA", "1").strip().lower() not in (
        "0",
        "false",
        "off",
    )


NUMBA_ENABLED = False
if _env_wants_numba():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


# ---------------------------------------------------------------------------
# BDeu family scoring
#
# For one child with cardinality r and a parent set with q joint parent
# configurations, the log BDeu local score is
#
#   sum_j [ lnG(a_j) - lnG(a_j + N_j) + sum_k ( lnG(a_jk + N_jk) - lnG(a_jk) ) ]
#
# with a_j = ess/q, a_jk = ess/(q*r).  Configurations and cells with zero
# counts contribute exactly 0 and are skipped, so each row is encoded as a
# single integer code = config * r + child_state and only the observed codes
# are visited.
# ---------------------------------------------------------------------------


def _score_families_numpy(data, cards, child, psets, psizes, ess):
    """Pure-numpy scoring of every (child, parent set) family in one batch.

    data: (n_rows, n_vars) int32; cards: (n_vars,) int64; psets: (n_fam, k_max)
    int64 padded with -1; psizes: (n_fam,) int64.  Returns (n_fam,) float64.
    """
    n_rows = data.shape[0]
    n_fam = psets.shape[0]
    r = int(cards[child])
    child_col = data[:, child].astype(np.int64)
    dense_limit = 4 * n_rows + 64
    out = np.empty(n_fam, dtype=np.float64)
    for f in range(n_fam):
        k = int(psizes[f])
        q = 1
        codes = child_col.copy()
        mult = r
        for j in range(k - 1, -1, -1):
            p = int(psets[f, j])
            codes += data[:, p].astype(np.int64) * mult
            mult *= int(cards[p])
            q *= int(cards[p])
        alpha_j = ess / q
        alpha_jk = ess / (q * r)
        if q * r <= dense_limit:
            # counting beats sorting when the code space is small
            dense = np.bincount(codes, minlength=q * r)
            uniq = np.nonzero(dense)[0]
            cnt = dense[uniq]
        else:
            uniq, cnt = np.unique(codes, return_counts=True)
        total = 0.0
        i = 0
        m = uniq.shape[0]
        while i < m:
            cfg = uniq[i] // r
            n_j = 0
            while i < m and uniq[i] // r == cfg:
                n_jk = int(cnt[i])
                total += math.lgamma(alpha_jk + n_jk) - math.lgamma(alpha_jk)
                n_j += n_jk
                i += 1
            total += math.lgamma(alpha_j) - math.lgamma(alpha_j + n_j)
        out[f] = total
    return out


def _zeta_max_numpy(bps):
    """In-place superset propagation: bps[v][S] := max over subsets of S.

    bps is (n, 2**n) float64; entries at masks containing v are never read
    by the sink recursion and may hold garbage.
    """
    n = bps.shape[0]
    for v in range(n):
        row = bps[v]
        for i in range(n):
            if i == v:
                continue
            r3 = row.reshape(-1, 2, 1 << i)
            np.maximum(r3[:, 1, :], r3[:, 0, :], out=r3[:, 1, :])


def _sink_dp_numpy(bps):
    """Best-sink recursion over subsets, layered by popcount.

    Returns (best, choice): best[S] is the optimal total score of a network
    over the variables in S; choice[S] the sink node picked for S (lowest
    index on ties).
    """
    n = bps.shape[0]
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = np.bitwise_count(masks)
    best = np.full(size, -np.inf, dtype=np.float64)
    choice = np.full(size, -1, dtype=np.int8)
    best[0] = 0.0
    for k in range(1, n + 1):
        layer = masks[pop == k]
        for v in range(n):
            bit = 1 << v
            sel = layer[(layer & bit) != 0]
            prev = sel ^ bit
            cand = best[prev] + bps[v, prev]
            cur = best[sel]
            upd = cand > cur
            cur[upd] = cand[upd]
            best[sel] = cur
            ch = choice[sel]
            ch[upd] = v
            choice[sel] = ch
    return best, choice


if NUMBA_ENABLED:

    @njit(cache=True, nogil=True)
    def _score_families_numba(data, cards, child, psets, psizes, ess):
        n_rows = data.shape[0]
        n_fam = psets.shape[0]
        r = cards[child]
        dense_limit = 4 * n_rows + 64
        counts = np.zeros(dense_limit, dtype=np.int64)
        out = np.empty(n_fam, dtype=np.float64)
        codes = np.empty(n_rows, dtype=np.int64)
        for f in range(n_fam):
            k = psizes[f]
            q = np.int64(1)
            for j in range(k):
                q *= cards[psets[f, j]]
            alpha_j = ess / q
            alpha_jk = ess / (q * r)
            for i in range(n_rows):
                c = np.int64(0)
                for j in range(k):
                    p = psets[f, j]
                    c = c * cards[p] + data[i, p]
                codes[i] = c * r + data[i, child]
            total = 0.0
            if q * r <= dense_limit:
                for i in range(n_rows):
                    counts[codes[i]] += 1
                for cfg in range(q):
                    n_j = 0
                    base = cfg * r
                    for s in range(r):
                        n_jk = counts[base + s]
                        if n_jk > 0:
                            total += math.lgamma(alpha_jk + n_jk) - math.lgamma(alpha_jk)
                            n_j += n_jk
                    if n_j > 0:
                        total += math.lgamma(alpha_j) - math.lgamma(alpha_j + n_j)
                for i in range(n_rows):  # reset only the touched cells
                    counts[codes[i]] = 0
            else:
                sc = np.sort(codes)
                i = 0
                while i < n_rows:
                    cfg = sc[i] // r
                    n_j = 0
                    while i < n_rows and sc[i] // r == cfg:
                        code = sc[i]
                        n_jk = 0
                        while i < n_rows and sc[i] == code:
                            n_jk += 1
                            i += 1
                        total += math.lgamma(alpha_jk + n_jk) - math.lgamma(alpha_jk)
                        n_j += n_jk
                    total += math.lgamma(alpha_j) - math.lgamma(alpha_j + n_j)
            out[f] = total
        return out

    @njit(cache=True, nogil=True)
    def _zeta_max_numba(bps):
        n = bps.shape[0]
        size = bps.shape[1]
        for v in range(n):
            for i in range(n):
                if i == v:
                    continue
                bit = 1 << i
                for s in range(size):
                    if s & bit:
                        a = bps[v, s ^ bit]
                        if a > bps[v, s]:
                            bps[v, s] = a

    @njit(cache=True, nogil=True)
    def _sink_dp_numba(bps):
        n = bps.shape[0]
        size = 1 << n
        best = np.empty(size, dtype=np.float64)
        choice = np.full(size, -1, dtype=np.int8)
        best[0] = 0.0
        for s in range(1, size):
            b = -np.inf
            c = -1
            for v in range(n):
                bit = 1 << v
                if s & bit:
                    prev = s ^ bit
                    cand = best[prev] + bps[v, prev]
                    if cand > b:
                        b = cand
                        c = v
            best[s] = b
            choice[s] = c
        return best, choice

    score_families = _score_families_numba
    zeta_max = _zeta_max_numba
    sink_dp = _sink_dp_numba
else:
    score_families = _score_families_numpy
    zeta_max = _zeta_max_numpy
    sink_dp = _sink_dp_numpy
