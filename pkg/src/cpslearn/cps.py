"""Candidate-parent-set tables: ranking, pruning, statistics and file I/O.

A :class:`ScoreTable` keeps, per node, the ranked list of scored parent
sets.  ``legal_filter`` drops every parent set that some proper subset
scores at least as well as (such sets can never appear in an optimal
network, since the subset preserves acyclicity and never scores worse).
``prune_percent`` then discards a bottom percentage of each node's ranked
list, always keeping the empty set available so that any learned graph can
contain a root node.

Score files use the GOBNILP/Jaakkola interchange layout::

    <n_vars>
    <name> <count>                  (per variable)
    <score> <k> <parent_1> ... <parent_k>   (count lines, parents by name)

with scores printed to 6 decimal places, single spaces, LF line endings.
"""

from __future__ import annotations

import io
import math
from itertools import combinations
from typing import IO, Sequence

from .errors import MalformedTableError, ParameterError, ParseError
from .scoring import ScoredFamily

SCORE_DECIMALS = 6


def _rank_key(e: ScoredFamily):
    # Descending score; ties broken by smaller set, then lexicographic.
    return (-e.score, len(e.parents), e.parents)


class ScoreTable:
    """Per-node ranked candidate parent sets over named variables."""

    __slots__ = ("names", "entries", "legality_pruned", "prune_percent_applied")

    def __init__(self, names: Sequence[str],
                 entries: Sequence[Sequence[ScoredFamily]], *,
                 legality_pruned: bool = False,
                 prune_percent_applied: int | None = None,
                 validate: bool = True):
        self.names = tuple(names)
        self.entries = tuple(
            tuple(sorted(node_entries, key=_rank_key)) for node_entries in entries
        )
        self.legality_pruned = legality_pruned
        self.prune_percent_applied = prune_percent_applied
        if validate:
            self._validate()

    def _validate(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise MalformedTableError("duplicate variable names")
        if len(self.entries) != n:
            raise MalformedTableError(
                f"expected entries for {n} nodes, got {len(self.entries)}"
            )
        for v, node_entries in enumerate(self.entries):
            seen = set()
            has_empty = False
            for e in node_entries:
                if e.child != v:
                    raise MalformedTableError(
                        f"entry for child {e.child} filed under node {v}"
                    )
                if tuple(sorted(e.parents)) != e.parents:
                    raise MalformedTableError(
                        f"node {v}: parents {e.parents} not sorted"
                    )
                if v in e.parents:
                    raise MalformedTableError(f"node {v} is its own parent")
                for p in e.parents:
                    if not 0 <= p < n:
                        raise MalformedTableError(
                            f"node {v}: parent index {p} out of range"
                        )
                if e.parents in seen:
                    raise MalformedTableError(
                        f"node {v}: duplicate parent set {e.parents}"
                    )
                seen.add(e.parents)
                if not e.parents:
                    has_empty = True
            if not has_empty:
                raise MalformedTableError(
                    f"node {v} ({self.names[v]}) is missing the empty parent set"
                )

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def total_cps(self) -> int:
        return sum(len(node_entries) for node_entries in self.entries)

    def __eq__(self, other):
        if not isinstance(other, ScoreTable):
            return NotImplemented
        return self.names == other.names and self.entries == other.entries

    def __repr__(self):
        return (f"ScoreTable(n_vars={self.n_vars}, total_cps={self.total_cps()}, "
                f"legality_pruned={self.legality_pruned}, "
                f"prune_percent_applied={self.prune_percent_applied})")


def legal_filter(raw: ScoreTable) -> ScoreTable:
    """Keep only parent sets that no proper subset in ``raw`` matches or beats.

    The empty set has no proper subsets and is always retained.  Ties prune
    the superset: a strictly larger set that merely equals a subset's score
    cannot improve any network.  Idempotent.
    """
    filtered = []
    for node_entries in raw.entries:
        by_parents = {e.parents: e.score for e in node_entries}
        kept = []
        for e in node_entries:
            dominated = False
            for k in range(len(e.parents)):
                for sub in combinations(e.parents, k):
                    s = by_parents.get(sub)
                    if s is not None and s >= e.score:
                        dominated = True
                        break
                if dominated:
                    break
            if not dominated:
                kept.append(e)
        filtered.append(kept)
    return ScoreTable(raw.names, filtered, legality_pruned=True,
                      prune_percent_applied=raw.prune_percent_applied)


def prune_percent(table: ScoreTable, p: int) -> ScoreTable:
    """Drop the bottom-ranked p percent of each node's list.

    Keeps the top ceil(m * (100-p) / 100) of a node's m entries (so even
    p=99 never empties a list) and re-inserts the empty parent set whenever
    the cut removed it, guaranteeing a root-capable candidate per node.
    p=0 is the identity.
    """
    if not isinstance(p, int) or isinstance(p, bool) or not 0 <= p <= 99:
        raise ParameterError(f"prune percentage must be an integer in [0, 99], got {p!r}")
    if p == 0:
        return table
    pruned = []
    for node_entries in table.entries:
        m = len(node_entries)
        keep = -(-m * (100 - p) // 100)  # ceil
        kept = list(node_entries[:keep])
        if not any(not e.parents for e in kept):
            empty = next(e for e in node_entries if not e.parents)
            kept.append(empty)
        pruned.append(kept)
    return ScoreTable(table.names, pruned, legality_pruned=table.legality_pruned,
                      prune_percent_applied=p)


# ---------------------------------------------------------------------------
# Score-file I/O
# ---------------------------------------------------------------------------


def _emit_key(e: ScoredFamily):
    # Emission order must match what a reader reconstructs from the rounded
    # scores, so write<-read round trips are byte-identical.
    return (-float(f"{e.score:.{SCORE_DECIMALS}f}"), len(e.parents), e.parents)


def write_scores(table: ScoreTable, sink: str | IO[str]) -> None:
    """Write a table in the score-file format described in the module docs."""
    close = False
    if isinstance(sink, str):
        out: IO[str] = open(sink, "w", encoding="utf-8", newline="\n")
        close = True
    else:
        out = sink
    try:
        out.write(f"{table.n_vars}\n")
        for v, node_entries in enumerate(table.entries):
            out.write(f"{table.names[v]} {len(node_entries)}\n")
            for e in sorted(node_entries, key=_emit_key):
                parts = [f"{e.score:.{SCORE_DECIMALS}f}", str(len(e.parents))]
                parts.extend(table.names[p] for p in e.parents)
                out.write(" ".join(parts) + "\n")
    finally:
        if close:
            out.close()


def dumps_scores(table: ScoreTable) -> str:
    buf = io.StringIO()
    write_scores(table, buf)
    return buf.getvalue()


def read_scores(source: str | IO[str]) -> ScoreTable:
    """Parse a score file; re-sorts entries and validates table invariants.

    Provenance flags cannot be recovered from the file format and are reset
    (legality_pruned=False, prune_percent_applied=None).
    """
    close = False
    if isinstance(source, str):
        stream: IO[str] = open(source, "r", encoding="utf-8")
        close = True
    else:
        stream = source
    try:
        return _parse_scores(stream)
    finally:
        if close:
            stream.close()


def loads_scores(text: str) -> ScoreTable:
    return _parse_scores(io.StringIO(text))


def _parse_scores(stream: IO[str]) -> ScoreTable:
    lineno = 0

    def next_line() -> str:
        nonlocal lineno
        raw = stream.readline()
        if raw == "":
            raise ParseError("unexpected end of file", line=lineno + 1)
        lineno += 1
        return raw.rstrip("\r\n")

    header = next_line().strip()
    try:
        n_vars = int(header)
    except ValueError:
        raise ParseError(f"expected variable count, found {header!r}", line=lineno)
    if n_vars < 1:
        raise ParseError(f"variable count must be positive, got {n_vars}", line=lineno)

    names: list[str] = []
    # Parent names may reference variables declared later, so parse by name
    # first and resolve indices once all declarations are in.
    raw_entries: list[list[tuple[float, tuple[str, ...], int]]] = []
    for _ in range(n_vars):
        decl = next_line().split()
        if len(decl) != 2:
            raise ParseError(
                f"expected '<name> <count>', found {' '.join(decl)!r}", line=lineno
            )
        name, count_s = decl
        try:
            count = int(count_s)
        except ValueError:
            raise ParseError(f"bad parent-set count {count_s!r}", line=lineno)
        if name in names:
            raise ParseError(f"duplicate variable {name!r}", line=lineno)
        if count < 1:
            raise ParseError(f"{name!r} declares {count} parent sets", line=lineno)
        names.append(name)
        node_raw = []
        for _ in range(count):
            fields = next_line().split()
            if len(fields) < 2:
                raise ParseError("expected '<score> <k> <parents...>'", line=lineno)
            try:
                score = float(fields[0])
                k = int(fields[1])
            except ValueError:
                raise ParseError(
                    f"bad score line {' '.join(fields)!r}", line=lineno
                )
            if k != len(fields) - 2:
                raise ParseError(
                    f"declared {k} parents but found {len(fields) - 2}", line=lineno
                )
            node_raw.append((score, tuple(fields[2:]), lineno))
        raw_entries.append(node_raw)

    trailing = stream.readline()
    while trailing:
        lineno += 1
        if trailing.strip():
            raise ParseError(
                f"unexpected content after {n_vars} variables", line=lineno
            )
        trailing = stream.readline()

    index = {name: v for v, name in enumerate(names)}
    entries: list[list[ScoredFamily]] = []
    for v, node_raw in enumerate(raw_entries):
        node_entries = []
        for score, parent_names, decl_line in node_raw:
            parents = []
            for pn in parent_names:
                idx = index.get(pn)
                if idx is None:
                    raise ParseError(f"unknown parent name {pn!r}", line=decl_line)
                parents.append(idx)
            node_entries.append(
                ScoredFamily(child=v, parents=tuple(sorted(parents)), score=score)
            )
        entries.append(node_entries)
    return ScoreTable(names, entries)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def all_possible_cps(n_vars: int, max_indeg: int) -> int:
    """Number of parent sets of size <= max_indeg summed over all nodes."""
    if not 0 <= max_indeg < n_vars:
        raise ParameterError(
            f"max_indeg must be in [0, {n_vars - 1}], got {max_indeg}"
        )
    return n_vars * sum(math.comb(n_vars - 1, k) for k in range(max_indeg + 1))


def cps_stats(table: ScoreTable, n_vars: int, max_indeg: int) -> tuple[int, float, float]:
    """(total retained CPSs, per-node mean, rate vs. all possible at max_indeg)."""
    if n_vars != table.n_vars:
        raise ParameterError(
            f"n_vars {n_vars} does not match table ({table.n_vars})"
        )
    total = table.total_cps()
    possible = all_possible_cps(n_vars, max_indeg)
    return total, total / n_vars, total / possible
