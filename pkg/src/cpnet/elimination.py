"""Iterated elimination of never-best-response and strictly dominated values."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CPNet, CPNetError, is_acyclic, row_for

NBR = "never-best-response"
DOMINATED = "strictly-dominated"

_KINDS = {"nbr": NBR, NBR: NBR, "dominated": DOMINATED, DOMINATED: DOMINATED}


class CyclicNetError(CPNetError, ValueError):
    pass


class EliminationError(CPNetError, RuntimeError):
    """An elimination would empty a domain; indicates a logic error."""


@dataclass(frozen=True)
class EliminationStep:
    variable: int
    removed_value: int  # index in the net the step applies to
    kind: str
    dominator: int | None = None
    value_name: str = ""

    def describe(self, net: CPNet) -> str:
        """``var=value (kind)`` using the names of the net before the step."""
        return f"{net.names[self.variable]}={self.value_name} ({self.kind})"


@dataclass(frozen=True)
class EliminationTrace:
    initial: CPNet
    final: CPNet
    steps: tuple

    def nets(self) -> list:
        """Every intermediate net, initial and final included."""
        out = [self.initial]
        for step in self.steps:
            out.append(remove_value(out[-1], step.variable, step.removed_value))
        return out

    def replay(self) -> CPNet:
        return self.nets()[-1]

    def lines(self) -> list:
        nets = self.nets()
        return [f"- {s.describe(nets[k])}" for k, s in enumerate(self.steps)]


def best_responses(net: CPNet, x: int) -> set:
    """Values of ``x`` that top at least one row of its table."""
    return {ranking[0] for ranking in net.rows[x]}


def never_best_responses(net: CPNet, x: int) -> set:
    return set(range(len(net.domains[x]))) - best_responses(net, x)


def strictly_dominated(net: CPNet, x: int) -> set:
    """Pairs ``(dominated, dominator)`` where dominator wins in every row."""
    size = len(net.domains[x])
    pos = np.empty((len(net.rows[x]), size), dtype=np.int64)
    for k, ranking in enumerate(net.rows[x]):
        pos[k, list(ranking)] = np.arange(size)
    return {(d, w) for d in range(size) for w in range(size)
            if d != w and bool(np.all(pos[:, w] < pos[:, d]))}


def remove_value(net: CPNet, x: int, v: int) -> CPNet:
    """The subnet without value ``v`` of ``x`` and every statement mentioning it."""
    size = len(net.domains[x])
    if not 0 <= v < size:
        raise ValueError(f"value index {v} out of range for {net.names[x]}")
    if size < 2:
        raise EliminationError(f"refusing to remove the last value of {net.names[x]}")

    def shift(u):
        return u - 1 if u > v else u

    domains = list(net.domains)
    domains[x] = net.domains[x][:v] + net.domains[x][v + 1:]
    rows = list(net.rows)
    rows[x] = tuple(tuple(shift(u) for u in r if u != v) for r in net.rows[x])
    for c in net.children(x):
        axis = net.parents[c].index(x)
        keys = np.arange(len(net.rows[c])).reshape(net.parent_sizes(c))
        keys = np.delete(keys, v, axis=axis).ravel()
        rows[c] = tuple(net.rows[c][k] for k in keys.tolist())
    return CPNet(net.names, tuple(domains), net.parents, tuple(rows))


def candidates(net: CPNet, kind: str) -> list:
    """All single-value eliminations justified by ``kind``, in scan order."""
    kind = _KINDS[kind]
    out = []
    for x in range(net.n):
        if kind == NBR:
            for v in sorted(never_best_responses(net, x)):
                out.append(EliminationStep(x, v, NBR, None, net.domains[x][v]))
        else:
            dominators = {}
            for d, w in sorted(strictly_dominated(net, x)):
                dominators.setdefault(d, w)
            for d, w in sorted(dominators.items()):
                out.append(EliminationStep(x, d, DOMINATED, w, net.domains[x][d]))
    return out


Policy = Callable[[list], EliminationStep]


def first_policy(options: list) -> EliminationStep:
    return options[0]


def random_policy(seed) -> Policy:
    rng = random.Random(seed)
    return lambda options: rng.choice(options)


def eliminate(net: CPNet, kind: str = "nbr", policy: Policy = first_policy) -> EliminationTrace:
    """Remove eliminable values one at a time until none is left.

    The default policy takes the lowest-indexed value of the lowest-indexed
    variable and rescans after every removal.
    """
    kind = _KINDS[kind]
    current = net
    steps = []
    while True:
        options = candidates(current, kind)
        if not options:
            break
        step = policy(options)
        if len(current.domains[step.variable]) < 2:
            raise EliminationError(f"attempted to empty the domain of {current.names[step.variable]}")
        steps.append(step)
        current = remove_value(current, step.variable, step.removed_value)
    return EliminationTrace(net, current, tuple(steps))


def unique_outcome(net: CPNet):
    """The only outcome of a net with singleton domains, else None."""
    if all(len(d) == 1 for d in net.domains):
        return (0,) * net.n
    return None


def solve_acyclic(net: CPNet, counter: dict | None = None) -> tuple:
    """Forward sweep: each variable takes the top of its row, parents first.

    ``counter["lookups"]`` (if given) is incremented once per table lookup.
    """
    acyclic, order = is_acyclic(net)
    if not acyclic:
        raise CyclicNetError("solve_acyclic needs an acyclic dependency graph")
    outcome = [None] * net.n
    for x in order:
        ranking = row_for(net, x, [outcome[p] for p in net.parents[x]])
        if counter is not None:
            counter["lookups"] = counter.get("lookups", 0) + 1
        outcome[x] = ranking[0]
    return tuple(outcome)
