"""Flip semantics of CP-nets: betterness chains and optimal outcomes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import CPNet, Outcome, SizeLimitError, decode, encode, lookup_order, max_outcomes

WORSENING = "worsening"
IMPROVING = "improving"


@dataclass(frozen=True)
class Flip:
    variable: int
    from_value: int
    to_value: int
    direction: str

    def reversed(self) -> Flip:
        other = IMPROVING if self.direction == WORSENING else WORSENING
        return Flip(self.variable, self.to_value, self.from_value, other)


def _flips(net: CPNet, o: Outcome, direction: str) -> list:
    out = []
    for i in range(net.n):
        ranking = lookup_order(net, i, o)
        pos = ranking.index(o[i])
        # candidates in ranking order, best first
        others = ranking[pos + 1:] if direction == WORSENING else ranking[:pos]
        for v in others:
            nxt = o[:i] + (v,) + o[i + 1:]
            out.append((Flip(i, o[i], v, direction), nxt))
    return out


def worsening_flips(net: CPNet, o: Outcome) -> list:
    """All ``(Flip, outcome)`` pairs one worsening flip away from ``o``."""
    return _flips(net, tuple(o), WORSENING)


def improving_flips(net: CPNet, o: Outcome) -> list:
    return _flips(net, tuple(o), IMPROVING)


def _guard(net: CPNet, limit: int | None) -> int:
    total = net.num_outcomes
    ceiling = max_outcomes(limit)
    if total > ceiling:
        raise SizeLimitError(f"{total} outcomes exceeds the limit of {ceiling}")
    return total


def _chain(pred, sizes, src, dst) -> tuple:
    path = [dst]
    node = pred[dst]
    while node != src:
        path.append(int(node))
        node = pred[node]
    path.append(src)
    return tuple(decode(c, sizes) for c in reversed(path))


def better(net: CPNet, a: Outcome, b: Outcome, limit: int | None = None):
    """Shortest chain of worsening flips from ``a`` to ``b``, or None.

    A chain has at least one flip, so ``better(net, o, o)`` is only non-None
    when a worsening cycle passes through ``o``.
    """
    total = _guard(net, limit)
    sizes = net.sizes
    src, dst = encode(a, sizes), encode(b, sizes)
    pred = np.full(total, -1, dtype=np.int64)
    kernels.bfs(*net.packed.arrays(), src, dst, False, pred)
    if pred[dst] == -1:
        return None
    return _chain(pred, sizes, src, dst)


def verify_witness(net: CPNet, chain) -> bool:
    """Check each step of ``chain`` is a single worsening flip."""
    if len(chain) < 2:
        return False
    for prev, nxt in zip(chain, chain[1:]):
        diff = [i for i in range(net.n) if prev[i] != nxt[i]]
        if len(diff) != 1:
            return False
        i = diff[0]
        ranking = lookup_order(net, i, prev)
        if ranking.index(nxt[i]) <= ranking.index(prev[i]):
            return False
    return True


def better_than(net: CPNet, o: Outcome, limit: int | None = None) -> set:
    """Outcomes better than ``o``: those reaching it by a worsening chain.

    Found by searching backward from ``o`` over improving flips.
    """
    total = _guard(net, limit)
    pred = np.full(total, -1, dtype=np.int64)
    kernels.bfs(*net.packed.arrays(), encode(o, net.sizes), -1, True, pred)
    return {decode(int(c), net.sizes) for c in np.flatnonzero(pred != -1)}


def is_optimal(net: CPNet, o: Outcome, limit: int | None = None) -> bool:
    """True iff no outcome is better than ``o`` under the chain definition."""
    return not better_than(net, o, limit)


def is_locally_optimal(net: CPNet, o: Outcome) -> bool:
    """True iff ``o`` admits no improving flip."""
    return not improving_flips(net, o)


def optimal_outcomes(net: CPNet, limit: int | None = None) -> set:
    """Brute-force oracle: every outcome with no better outcome."""
    _guard(net, limit)
    mark = kernels.dominated_mask(*net.packed.arrays())
    return {decode(int(c), net.sizes) for c in np.flatnonzero(~mark)}


def betterness_relation(net: CPNet, limit: int | None = None) -> set:
    """All pairs ``(a, b)`` with ``a`` better than ``b``, via :func:`better`."""
    total = _guard(net, limit)
    outcomes = [decode(c, net.sizes) for c in range(total)]
    return {(a, b) for a in outcomes for b in outcomes if better(net, a, b, limit) is not None}
