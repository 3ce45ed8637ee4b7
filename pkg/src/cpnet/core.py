"""CP-net data model: variables, domains, conditional preference tables.

Variables and values are dense integer indices; names only matter at the
I/O boundary.  A table row is keyed by the mixed-radix code of the parent
assignment (first parent most significant) and holds a ranking, i.e. a
permutation of the owner's value indices, most preferred first.
"""
from __future__ import annotations

import heapq
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Mapping, Sequence

import numpy as np

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
VALUE_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.'+-]*\Z")

DEFAULT_MAX_TABLE_ROWS = 4096
DEFAULT_MAX_OUTCOMES = 2**20

Outcome = tuple  # one value index per variable
Ranking = tuple  # value indices, best first


class CPNetError(Exception):
    """Base class for errors raised by this package."""


class InvalidNetError(CPNetError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            lines += f"; ... ({more} more)"
        super().__init__(f"invalid CP-net: {lines}")


class SizeLimitError(CPNetError):
    """An exponential structure would exceed a configured ceiling."""


def max_outcomes(limit: int | None = None) -> int:
    """Resolve the oracle ceiling: explicit value, then $CPNET_MAX_OUTCOMES."""
    if limit is not None:
        return int(limit)
    env = os.environ.get("CPNET_MAX_OUTCOMES")
    if env:
        return int(env)
    return DEFAULT_MAX_OUTCOMES


@dataclass(frozen=True)
class Violation:
    kind: str  # missing-row, duplicate-row, non-permutation, bad-parent, duplicate-name, ...
    variable: str | None
    message: str
    row: int | None = None

    def __str__(self):
        where = self.variable if self.variable is not None else "<net>"
        if self.row is not None:
            where += f" row {self.row}"
        return f"{self.kind} ({where}): {self.message}"


# mixed-radix helpers ------------------------------------------------------

def radix_strides(sizes: Sequence[int]) -> tuple:
    """Place values for a mixed-radix code with the first digit most significant."""
    strides = [1] * len(sizes)
    for k in range(len(sizes) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]
    return tuple(strides)


def encode(digits: Sequence[int], sizes: Sequence[int]) -> int:
    code = 0
    for d, s in zip(digits, sizes):
        code = code * s + d
    return code


def decode(code: int, sizes: Sequence[int]) -> tuple:
    digits = []
    for s in reversed(sizes):
        code, d = divmod(code, s)
        digits.append(d)
    return tuple(reversed(digits))


@dataclass(frozen=True)
class PackedNet:
    """Flat arrays describing conditional rankings, consumed by the kernels.

    ``rank[rank_ptr[i] + key * sizes[i] + v]`` is the position of value ``v``
    of variable ``i`` in the row with key ``key`` (0 = most preferred).
    """

    sizes: np.ndarray
    strides: np.ndarray
    par_ptr: np.ndarray
    par_idx: np.ndarray
    par_stride: np.ndarray
    rank_ptr: np.ndarray
    rank: np.ndarray

    @property
    def total(self) -> int:
        return int(prod(int(s) for s in self.sizes))

    def arrays(self):
        return (self.sizes, self.strides, self.par_ptr, self.par_idx,
                self.par_stride, self.rank_ptr, self.rank)


def pack(sizes, parents, rows) -> PackedNet:
    """Build a :class:`PackedNet` from per-variable parents and dense rows."""
    n = len(sizes)
    par_ptr = np.zeros(n + 1, dtype=np.int64)
    par_idx, par_stride = [], []
    rank_ptr = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    for i in range(n):
        ps = parents[i]
        psizes = [sizes[p] for p in ps]
        par_idx.extend(ps)
        par_stride.extend(radix_strides(psizes))
        par_ptr[i + 1] = par_ptr[i] + len(ps)
        table = np.empty((len(rows[i]), sizes[i]), dtype=np.int64)
        for key, ranking in enumerate(rows[i]):
            table[key, list(ranking)] = np.arange(sizes[i])
        chunks.append(table.ravel())
        rank_ptr[i + 1] = rank_ptr[i] + table.size
    return PackedNet(
        sizes=np.asarray(sizes, dtype=np.int64),
        strides=np.asarray(radix_strides(sizes), dtype=np.int64),
        par_ptr=par_ptr,
        par_idx=np.asarray(par_idx, dtype=np.int64),
        par_stride=np.asarray(par_stride, dtype=np.int64),
        rank_ptr=rank_ptr,
        rank=np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64),
    )


@dataclass(frozen=True)
class CPNet:
    """A CP-net.

    ``rows[i][key]`` is the ranking of variable ``i``'s values under the
    parent assignment encoded by ``key``.  Construction does not validate;
    use :func:`validate` or :func:`build_net`.
    """

    names: tuple
    domains: tuple
    parents: tuple
    rows: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def sizes(self) -> tuple:
        return tuple(len(d) for d in self.domains)

    @property
    def num_outcomes(self) -> int:
        return prod(self.sizes)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def value_index(self, var: int, token: str) -> int:
        try:
            return self.domains[var].index(token)
        except ValueError:
            raise KeyError(f"{token!r} is not in the domain of {self.names[var]}") from None

    def parent_sizes(self, var: int) -> tuple:
        return tuple(len(self.domains[p]) for p in self.parents[var])

    def children(self, var: int) -> tuple:
        return tuple(c for c in range(self.n) if var in self.parents[c])

    def outcome_names(self, outcome: Outcome) -> tuple:
        return tuple(self.domains[i][v] for i, v in enumerate(outcome))

    def outcome_from_names(self, values: Mapping[str, str] | Sequence[str]) -> Outcome:
        if isinstance(values, Mapping):
            missing = [x for x in self.names if x not in values]
            if missing:
                raise KeyError(f"outcome misses variables: {', '.join(missing)}")
            extra = [x for x in values if x not in self.names]
            if extra:
                raise KeyError(f"unknown variables: {', '.join(extra)}")
            values = [values[x] for x in self.names]
        if len(values) != self.n:
            raise KeyError(f"expected {self.n} values, got {len(values)}")
        return tuple(self.value_index(i, v) for i, v in enumerate(values))

    def canonical(self) -> CPNet:
        """Same net with every parent list sorted by variable index."""
        if all(list(ps) == sorted(ps) for ps in self.parents):
            return self
        parents, rows = [], []
        for i in range(self.n):
            order = sorted(range(len(self.parents[i])), key=lambda k: self.parents[i][k])
            keys = np.arange(len(self.rows[i])).reshape(self.parent_sizes(i))
            keys = np.transpose(keys, order).ravel()
            parents.append(tuple(self.parents[i][k] for k in order))
            rows.append(tuple(self.rows[i][k] for k in keys))
        return CPNet(self.names, self.domains, tuple(parents), tuple(rows))

    @cached_property
    def packed(self) -> PackedNet:
        return pack(self.sizes, self.parents, self.rows)


def structurally_equal(a: CPNet, b: CPNet) -> bool:
    """Same variables, domains, parent sets and rows, up to parent-list order."""
    return a.canonical() == b.canonical()


# validation --------------------------------------------------------------

def validate(net: CPNet, max_rows: int = DEFAULT_MAX_TABLE_ROWS) -> list:
    """Return every structural violation of ``net``; an empty list means valid."""
    out = []
    names = list(net.names)
    n = len(names)
    if len(net.domains) != n or len(net.parents) != n or len(net.rows) != n:
        out.append(Violation("shape", None, "names, domains, parents and rows must have equal length"))
        return out
    seen = set()
    for name in names:
        if not isinstance(name, str) or not NAME_RE.match(name):
            out.append(Violation("bad-name", str(name), "not an identifier"))
        if name in seen:
            out.append(Violation("duplicate-name", name, "declared more than once"))
        seen.add(name)
    for i, dom in enumerate(net.domains):
        if len(dom) == 0:
            out.append(Violation("empty-domain", names[i], "domain is empty"))
        if len(set(dom)) != len(dom):
            out.append(Violation("duplicate-value", names[i], "domain repeats a value"))
    for i in range(n):
        ps = net.parents[i]
        bad = False
        for p in ps:
            if not isinstance(p, (int, np.integer)) or not 0 <= p < n:
                out.append(Violation("bad-parent", names[i], f"parent {p!r} is not a variable"))
                bad = True
            elif p == i:
                out.append(Violation("bad-parent", names[i], "variable is its own parent"))
                bad = True
        if len(set(ps)) != len(ps):
            out.append(Violation("bad-parent", names[i], "parent listed twice"))
            bad = True
        if bad:
            continue
        expected = prod(len(net.domains[p]) for p in ps)
        if expected > max_rows:
            out.append(Violation("table-too-large", names[i],
                                 f"{expected} rows exceeds the limit of {max_rows}"))
            continue
        rows = net.rows[i]
        if len(rows) > expected:
            out.append(Violation("duplicate-row", names[i],
                                 f"{len(rows)} rows for {expected} parent assignments"))
        target = set(range(len(net.domains[i])))
        for key in range(expected):
            ranking = rows[key] if key < len(rows) else None
            if ranking is None:
                out.append(Violation("missing-row", names[i], "no preference for this parent assignment", key))
            elif len(ranking) != len(target) or set(ranking) != target:
                out.append(Violation("non-permutation", names[i],
                                     "ranking is not a permutation of the domain", key))
    return out


def check(net: CPNet, max_rows: int = DEFAULT_MAX_TABLE_ROWS) -> CPNet:
    violations = validate(net, max_rows)
    if violations:
        too_large = [v for v in violations if v.kind == "table-too-large"]
        if too_large and len(too_large) == len(violations):
            raise SizeLimitError(str(too_large[0]))
        raise InvalidNetError(violations)
    return net


def _ranking(ranking, domain) -> tuple:
    if isinstance(ranking, str):
        ranking = [t.strip() for t in ranking.split(">")]
    try:
        return tuple(domain.index(t) for t in ranking)
    except ValueError:
        raise InvalidNetError([Violation("non-permutation", None, f"bad ranking {ranking!r}")]) from None


def build_net(domains: Mapping[str, Sequence[str]],
              parents: Mapping[str, Sequence[str]],
              cpts: Mapping[str, Mapping],
              max_rows: int = DEFAULT_MAX_TABLE_ROWS) -> CPNet:
    """Build and validate a net from names.

    ``cpts[var]`` maps a tuple of parent values (in the order of
    ``parents[var]``) to a ranking, given as ``"x > y > z"`` or a sequence.
    Parent lists are stored sorted by variable index.
    """
    names = tuple(domains)
    doms = tuple(tuple(domains[x]) for x in names)
    index = {x: i for i, x in enumerate(names)}
    par_out, rows_out = [], []
    violations = []
    for i, x in enumerate(names):
        given = list(parents.get(x, ()))
        unknown = [p for p in given if p not in index]
        if unknown:
            violations.append(Violation("bad-parent", x, f"unknown parents {unknown}"))
            par_out.append(())
            rows_out.append(())
            continue
        ps = sorted(index[p] for p in given)
        perm = [given.index(names[p]) for p in ps]
        psizes = [len(doms[p]) for p in ps]
        table = [None] * prod(psizes)
        for cond, ranking in cpts.get(x, {}).items():
            if isinstance(cond, str):
                cond = (cond,)
            cond = tuple(cond)
            try:
                digits = [doms[ps[k]].index(cond[perm[k]]) for k in range(len(ps))]
            except (ValueError, IndexError):
                violations.append(Violation("bad-row", x, f"bad condition {cond!r}"))
                continue
            if len(cond) != len(ps):
                violations.append(Violation("bad-row", x, f"bad condition {cond!r}"))
                continue
            key = encode(digits, psizes)
            if table[key] is not None:
                violations.append(Violation("duplicate-row", x, f"condition {cond!r} given twice", key))
            table[key] = _ranking(ranking, doms[i])
        par_out.append(tuple(ps))
        rows_out.append(tuple(table))
    if violations:
        raise InvalidNetError(violations)
    return check(CPNet(names, doms, tuple(par_out), tuple(rows_out)), max_rows)


# structure ---------------------------------------------------------------

def dependency_graph(net: CPNet) -> dict:
    """Adjacency ``parent -> sorted children`` over every variable."""
    return {x: net.children(x) for x in range(net.n)}


def is_acyclic(net: CPNet):
    """Return ``(True, order)`` with parents before children, else ``(False, None)``.

    Kahn's algorithm; among ready variables the lowest index goes first.
    """
    indeg = [len(ps) for ps in net.parents]
    graph = dependency_graph(net)
    ready = [x for x in range(net.n) if indeg[x] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        x = heapq.heappop(ready)
        order.append(x)
        for c in graph[x]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != net.n:
        return False, None
    return True, tuple(order)


def project(outcome: Outcome, variables: Sequence[int]) -> tuple:
    n = len(outcome)
    for v in variables:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
            raise ValueError(f"unknown variable index {v!r}")
    if len(set(variables)) != len(variables):
        raise ValueError("variables must be distinct")
    return tuple(outcome[v] for v in variables)


def row_key(net: CPNet, var: int, parent_values: Sequence[int]) -> int:
    return encode(parent_values, net.parent_sizes(var))


def row_for(net: CPNet, var: int, parent_values: Sequence[int]) -> Ranking:
    """Ranking of ``var`` under a parent assignment given in parent-list order."""
    return net.rows[var][row_key(net, var, parent_values)]


def lookup_order(net: CPNet, var: int, outcome: Outcome) -> Ranking:
    return row_for(net, var, project(outcome, net.parents[var]))


def prefers(ranking: Ranking, a: int, b: int) -> bool:
    """Strict preference a > b in a ranking."""
    return ranking.index(a) < ranking.index(b)


def weakly_prefers(ranking: Ranking, a: int, b: int) -> bool:
    return a == b or prefers(ranking, a, b)
