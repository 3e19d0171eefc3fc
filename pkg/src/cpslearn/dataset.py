"""Discrete tabular data: ingestion and contingency counting for families.

A :class:`Dataset` holds a complete discrete data matrix with state indices
in [0, cardinality).  :func:`load_dataset` always infers exactly-dense
cardinalities (1 + max observed state per column); direct construction may
declare larger cardinalities, e.g. for states that exist but were never
sampled.  :func:`family_counts` produces the sufficient statistics for one
(child, parent set) family; the scoring module consumes the same codes
through the fast kernels, while this function is the plain reference used
by contracts and tests.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .errors import InvalidFamilyError, ParseError

# Tokens treated as missing data; complete data is required, so these abort
# the load instead of being imputed.
MISSING_TOKENS = frozenset({"", "?"})


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable discrete dataset: variable names, cardinalities, state rows."""

    names: tuple[str, ...]
    cardinalities: tuple[int, ...]
    rows: np.ndarray  # (n_rows, n_vars) int32, read-only

    def __post_init__(self):
        rows = np.ascontiguousarray(self.rows, dtype=np.int32)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "cardinalities", tuple(int(c) for c in self.cardinalities))
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-D matrix")
        n_vars = len(self.names)
        if len(self.cardinalities) != n_vars or rows.shape[1] != n_vars:
            raise ValueError("names, cardinalities and row width disagree")
        if len(set(self.names)) != n_vars:
            raise ValueError("duplicate variable names")
        for i, card in enumerate(self.cardinalities):
            if card < 1:
                raise ValueError(f"cardinality of {self.names[i]!r} must be >= 1")
            if rows.shape[0] > 0:
                col = rows[:, i]
                if col.min() < 0:
                    raise ValueError(f"negative state index in {self.names[i]!r}")
                if int(col.max()) >= card:
                    raise ValueError(
                        f"{self.names[i]!r}: state {int(col.max())} outside "
                        f"cardinality {card}"
                    )
        rows.setflags(write=False)

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])


@dataclass(frozen=True, eq=False)
class FamilyCounts:
    """Sufficient statistics for one (child | parents) family.

    ``counts`` maps the mixed-radix parent-configuration index to the
    per-child-state count vector; configurations that never occur in the
    data are omitted (their vectors are all zero).  ``q`` is the number of
    possible configurations, i.e. the product of the parent cardinalities
    (1 for the empty set).
    """

    child: int
    parents: tuple[int, ...]
    counts: dict[int, np.ndarray] = field(repr=False)
    q: int
    r: int
    n_rows: int


def _check_family(n_vars: int, child: int, parents: Iterable[int]) -> tuple[int, ...]:
    parents = tuple(int(p) for p in parents)
    child = int(child)
    if not 0 <= child < n_vars:
        raise InvalidFamilyError(f"child index {child} out of range")
    for p in parents:
        if not 0 <= p < n_vars:
            raise InvalidFamilyError(f"parent index {p} out of range")
    if child in parents:
        raise InvalidFamilyError(f"node {child} cannot be its own parent")
    if len(set(parents)) != len(parents):
        raise InvalidFamilyError("parents must be pairwise distinct")
    return parents


def family_counts(ds: Dataset, child: int, parents: Iterable[int]) -> FamilyCounts:
    """Tally co-occurrence counts of the child's states per parent configuration.

    The configuration index is the mixed-radix encoding of the parent states
    in the given parent order (first parent most significant).
    """
    parents = _check_family(ds.n_vars, child, parents)
    r = ds.cardinalities[child]
    q = 1
    codes = np.zeros(ds.n_rows, dtype=np.int64)
    for p in parents:
        codes = codes * ds.cardinalities[p] + ds.rows[:, p]
        q *= ds.cardinalities[p]
    combined = codes * r + ds.rows[:, child]
    uniq, cnt = np.unique(combined, return_counts=True)
    counts: dict[int, np.ndarray] = {}
    for code, c in zip(uniq.tolist(), cnt.tolist()):
        cfg, state = divmod(code, r)
        vec = counts.get(cfg)
        if vec is None:
            vec = np.zeros(r, dtype=np.int64)
            counts[cfg] = vec
        vec[state] = c
    return FamilyCounts(child=child, parents=parents, counts=counts, q=q, r=r,
                        n_rows=ds.n_rows)


def load_dataset(source: str | IO[str], delimiter: str | None = ",") -> Dataset:
    """Read a delimited text file into a Dataset.

    The first line is a header of unique variable names; each following line
    holds one token per variable.  Tokens are mapped to dense state indices
    per column in order of first appearance.  ``delimiter`` is a single
    character, or None to split on any whitespace.  Missing-value tokens
    ('' or '?') are a hard error: complete data is required.
    """
    close = False
    if isinstance(source, str):
        stream: IO[str] = open(source, "r", encoding="utf-8")
        close = True
    else:
        stream = source
    try:
        return _parse_dataset(stream, delimiter)
    finally:
        if close:
            stream.close()


def _split(line: str, delimiter: str | None) -> list[str]:
    line = line.rstrip("\r\n")
    if delimiter is None:
        return line.split()
    return [tok.strip() for tok in line.split(delimiter)]


def _parse_dataset(stream: IO[str], delimiter: str | None) -> Dataset:
    header_line = stream.readline()
    if header_line == "":
        raise ParseError("empty input: missing header", line=1)
    names = _split(header_line, delimiter)
    if any(n == "" for n in names):
        raise ParseError("empty variable name in header", line=1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names in header", line=1)
    n_vars = len(names)

    maps: list[dict[str, int]] = [{} for _ in range(n_vars)]
    data: list[list[int]] = []
    lineno = 1
    for raw in stream:
        lineno += 1
        if raw.strip() == "":
            continue
        toks = _split(raw, delimiter)
        if len(toks) != n_vars:
            raise ParseError(
                f"expected {n_vars} values, found {len(toks)}", line=lineno
            )
        row = []
        for i, tok in enumerate(toks):
            if tok in MISSING_TOKENS:
                raise ParseError(
                    f"missing value for {names[i]!r} (complete data required)",
                    line=lineno,
                )
            m = maps[i]
            idx = m.get(tok)
            if idx is None:
                idx = len(m)
                m[tok] = idx
            row.append(idx)
        data.append(row)
    if not data:
        raise ParseError("no data rows after header", line=2)
    rows = np.asarray(data, dtype=np.int32)
    cards = tuple(len(m) for m in maps)
    return Dataset(names=tuple(names), cardinalities=cards, rows=rows)


def loads_dataset(text: str, delimiter: str | None = ",") -> Dataset:
    """Parse a dataset from an in-memory string (convenience for tests)."""
    return _parse_dataset(io.StringIO(text), delimiter)
