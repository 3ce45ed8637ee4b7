"""Seeded random CP-nets and games for property tests and the ``gen`` command."""
from __future__ import annotations

import random
from math import prod

from .core import CPNet, check
from .game import Game, check_game


def _sizes(rng: random.Random, n: int, domain) -> list:
    if isinstance(domain, int):
        return [domain] * n
    lo, hi = domain
    return [rng.randint(lo, hi) for _ in range(n)]


def _permutation(rng: random.Random, size: int) -> tuple:
    p = list(range(size))
    rng.shuffle(p)
    return tuple(p)


def random_net(n: int, domain=2, acyclic: bool = False, seed=None,
               max_parents: int = 2, rng: random.Random | None = None) -> CPNet:
    """Random valid net.

    Parent-set size is uniform in ``0..max_parents`` (capped by the
    candidates available) and parents are drawn uniformly; in acyclic mode
    only lower-indexed variables are candidates.  ``domain`` is a size or an
    inclusive ``(lo, hi)`` range.
    """
    rng = rng or random.Random(seed)
    sizes = _sizes(rng, n, domain)
    names = tuple(f"X{i}" for i in range(n))
    domains = tuple(tuple(f"x{i}_{v}" for v in range(s)) for i, s in enumerate(sizes))
    parents, rows = [], []
    for i in range(n):
        pool = list(range(i)) if acyclic else [j for j in range(n) if j != i]
        k = rng.randint(0, min(max_parents, len(pool)))
        ps = tuple(sorted(rng.sample(pool, k)))
        parents.append(ps)
        rows.append(tuple(_permutation(rng, sizes[i]) for _ in range(prod(sizes[p] for p in ps))))
    return check(CPNet(names, domains, tuple(parents), tuple(rows)))


def random_game(n: int, strategies=2, seed=None, rng: random.Random | None = None) -> Game:
    """Random game: an independent uniform ranking per opponent profile."""
    rng = rng or random.Random(seed)
    sizes = _sizes(rng, n, strategies)
    players = tuple(f"P{i}" for i in range(n))
    strats = tuple(tuple(f"s{i}_{v}" for v in range(s)) for i, s in enumerate(sizes))
    prefs = []
    for i in range(n):
        count = prod(sizes[j] for j in range(n) if j != i)
        prefs.append(tuple(_permutation(rng, sizes[i]) for _ in range(count)))
    return check_game(Game(players, strats, tuple(prefs)))
