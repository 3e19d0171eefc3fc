"""Shared fixtures-in-spirit: random instances and independent oracles.

The oracles here deliberately avoid the library's fast paths: BDeu goes
through ``family_counts`` plus mpmath's arbitrary-precision loggamma, DAG
optima come from explicit enumeration, and DAG counting filters every
labeled digraph.  They exist to check the production code, so they must not
share its shortcuts.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from cpslearn import Dataset, ScoredFamily, ScoreTable, family_counts


def random_table(rng, n, max_indeg, lo=1.0, hi=100.0) -> ScoreTable:
    """Exhaustive raw table (all subsets up to max_indeg) with random scores."""
    entries = []
    for v in range(n):
        others = [u for u in range(n) if u != v]
        node = []
        for k in range(max_indeg + 1):
            for ps in combinations(others, k):
                node.append(ScoredFamily(v, ps, -float(rng.uniform(lo, hi))))
        entries.append(node)
    return ScoreTable([f"V{i}" for i in range(n)], entries)


def random_dataset(rng, n_vars, n_rows, max_card=4) -> Dataset:
    """Uniform random discrete data, densely re-encoded per column."""
    cards = rng.integers(2, max_card + 1, size=n_vars)
    cols = []
    dense_cards = []
    for c in cards:
        col = rng.integers(0, int(c), size=n_rows)
        _, dense = np.unique(col, return_inverse=True)
        cols.append(dense)
        dense_cards.append(int(dense.max()) + 1)
    rows = np.stack(cols, axis=1).astype(np.int32)
    names = tuple(f"V{i}" for i in range(n_vars))
    return Dataset(names, tuple(dense_cards), rows)


def bdeu_oracle(ds: Dataset, child: int, parents, ess: float) -> float:
    """BDeu from raw contingency counts with 50-digit loggamma arithmetic."""
    from mpmath import loggamma, mp, mpf

    mp.dps = 50
    fc = family_counts(ds, child, parents)
    a_j = mpf(ess) / fc.q
    a_jk = mpf(ess) / (fc.q * fc.r)
    total = mpf(0)
    for vec in fc.counts.values():
        n_j = int(vec.sum())
        total += loggamma(a_j) - loggamma(a_j + n_j)
        for n_jk in vec.tolist():
            if n_jk:
                total += loggamma(a_jk + n_jk) - loggamma(a_jk)
    return float(total)


def parents_acyclic(parent_choice) -> bool:
    """Kahn's algorithm on a parent-list representation."""
    n = len(parent_choice)
    indeg = [len(ps) for ps in parent_choice]
    children = [[] for _ in range(n)]
    for v, ps in enumerate(parent_choice):
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


def brute_force_best(table: ScoreTable) -> float:
    """Maximum total score over every acyclic assignment of table entries."""
    per_node = [[(e.parents, e.score) for e in ents] for ents in table.entries]
    best = -np.inf
    for assign in product(*per_node):
        if parents_acyclic([ps for ps, _ in assign]):
            total = sum(s for _, s in assign)
            if total > best:
                best = total
    return float(best)


def count_acyclic_assignments(table: ScoreTable) -> int:
    per_node = [[e.parents for e in ents] for ents in table.entries]
    return sum(
        1 for assign in product(*per_node) if parents_acyclic(list(assign))
    )


def brute_force_dag_count(n: int) -> int:
    """Count labeled DAGs by filtering all digraphs without self-loops."""
    if n == 0:
        return 1
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    for bits in product((0, 1), repeat=len(offdiag)):
        parents = [[] for _ in range(n)]
        for (i, j), b in zip(offdiag, bits):
            if b:
                parents[j].append(i)
        if parents_acyclic(parents):
            count += 1
    return count


def sample_bn_dataset(rng, n_vars=30, n_rows=1000, max_indeg=3,
                      max_card=3) -> Dataset:
    """Forward-sample a random Bayesian network with bounded in-degree."""
    order = [int(v) for v in rng.permutation(n_vars)]
    cards = rng.integers(2, max_card + 1, size=n_vars)
    data = np.zeros((n_rows, n_vars), dtype=np.int64)
    for pos, v in enumerate(order):
        preds = order[:pos]
        k = int(rng.integers(0, min(len(preds), max_indeg) + 1))
        ps = sorted(int(p) for p in rng.choice(preds, size=k, replace=False)) if k else []
        q = 1
        codes = np.zeros(n_rows, dtype=np.int64)
        for p in ps:
            codes = codes * int(cards[p]) + data[:, p]
            q *= int(cards[p])
        cpt = rng.dirichlet(np.full(int(cards[v]), 0.4), size=q)
        cum = np.cumsum(cpt[codes], axis=1)
        data[:, v] = (rng.random(n_rows)[:, None] > cum).sum(axis=1)
    # dense re-encoding: rarely-sampled states may be absent entirely
    cols = []
    dense_cards = []
    for i in range(n_vars):
        _, dense = np.unique(data[:, i], return_inverse=True)
        cols.append(dense)
        dense_cards.append(int(dense.max()) + 1)
    rows = np.stack(cols, axis=1).astype(np.int32)
    names = tuple(f"X{i}" for i in range(n_vars))
    return Dataset(names, tuple(dense_cards), rows)
