"""Redundant parents and reduced CP-nets."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import CPNet, CPNetError


class NotRedundantError(CPNetError, ValueError):
    """Dropping the parent would change the preference semantics."""


@dataclass(frozen=True)
class RedundancyFinding:
    child: int
    redundant_parent: int


def _table(net: CPNet, x: int) -> np.ndarray:
    """Rows of ``x`` as an array of shape ``parent_sizes + (|D(x)|,)``."""
    arr = np.asarray(net.rows[x], dtype=np.int64)
    return arr.reshape(net.parent_sizes(x) + (len(net.domains[x]),))


def is_redundant(net: CPNet, x: int, y: int) -> bool:
    if y not in net.parents[x]:
        return False
    axis = net.parents[x].index(y)
    table = _table(net, x)
    first = np.take(table, [0], axis=axis)
    return bool(np.all(table == first))


def redundant_parents(net: CPNet, x: int) -> list:
    return [RedundancyFinding(x, y) for y in net.parents[x] if is_redundant(net, x, y)]


def drop_parent(net: CPNet, x: int, y: int) -> CPNet:
    """Remove redundant parent ``y`` from ``x`` and re-key its table."""
    if not is_redundant(net, x, y):
        raise NotRedundantError(
            f"{net.names[y]} is not a redundant parent of {net.names[x]}")
    axis = net.parents[x].index(y)
    table = np.take(_table(net, x), 0, axis=axis)
    rows = tuple(tuple(r) for r in table.reshape(-1, len(net.domains[x])).tolist())
    parents = net.parents[x][:axis] + net.parents[x][axis + 1:]
    return CPNet(
        net.names,
        net.domains,
        net.parents[:x] + (parents,) + net.parents[x + 1:],
        net.rows[:x] + (rows,) + net.rows[x + 1:],
    )


def findings(net: CPNet) -> list:
    return [f for x in range(net.n) for f in redundant_parents(net, x)]


def reduce(net: CPNet, rng: random.Random | None = None) -> CPNet:
    """Drop redundant parents until none is left.

    By default the first finding (lowest child, then lowest parent) is
    dropped and the scan restarts.  With ``rng`` a random finding is dropped
    at each step instead; used to check that the fixpoint does not depend on
    the order.
    """
    while True:
        found = findings(net)
        if not found:
            return net
        f = rng.choice(found) if rng is not None else found[0]
        net = drop_parent(net, f.child, f.redundant_parent)


def is_reduced(net: CPNet) -> bool:
    return not findings(net)
