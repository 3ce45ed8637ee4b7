"""Strategic games with parametrized preferences and their CP-net encodings."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from . import kernels
from .core import (
    DEFAULT_MAX_TABLE_ROWS,
    CPNet,
    SizeLimitError,
    decode,
    encode,
    max_outcomes,
    pack,
)

JointStrategy = tuple


class InvalidGameError(ValueError):
    pass


@dataclass(frozen=True)
class Game:
    """A game where each player ranks its own strategies per opponent profile.

    ``prefs[i][code]`` is a ranking (strategy indices, best first) of player
    ``i``'s strategies, where ``code`` is the mixed-radix code of the
    opponents' joint strategy in player order.
    """

    players: tuple
    strategies: tuple
    prefs: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def sizes(self) -> tuple:
        return tuple(len(s) for s in self.strategies)

    def opponent_sizes(self, i: int) -> tuple:
        return opponents_of(self.sizes, i)

    def order(self, i: int, opponents: JointStrategy) -> tuple:
        """Player ``i``'s ranking given the opponents' joint strategy."""
        return self.prefs[i][encode(opponents, self.opponent_sizes(i))]

    def profile_names(self, s: JointStrategy) -> tuple:
        return tuple(self.strategies[i][v] for i, v in enumerate(s))

    @cached_property
    def packed(self):
        parents = tuple(tuple(j for j in range(self.n) if j != i) for i in range(self.n))
        return pack(self.sizes, parents, self.prefs)


def check_game(g: Game) -> Game:
    problems = []
    if len(set(g.players)) != len(g.players):
        problems.append("duplicate player names")
    if len(g.strategies) != g.n or len(g.prefs) != g.n:
        raise InvalidGameError("players, strategies and prefs must have equal length")
    for i, strat in enumerate(g.strategies):
        if not strat:
            problems.append(f"player {g.players[i]} has no strategies")
            continue
        if len(set(strat)) != len(strat):
            problems.append(f"player {g.players[i]} repeats a strategy")
        expected = prod(g.opponent_sizes(i))
        if len(g.prefs[i]) != expected:
            problems.append(f"player {g.players[i]}: {len(g.prefs[i])} orders for {expected} opponent profiles")
        target = set(range(len(strat)))
        for code, ranking in enumerate(g.prefs[i]):
            if ranking is None or len(ranking) != len(strat) or set(ranking) != target:
                problems.append(f"player {g.players[i]} profile {code}: not a strict linear order")
    if problems:
        raise InvalidGameError("; ".join(problems))
    return g


def opponents_of(s: JointStrategy, i: int) -> tuple:
    """``s`` with coordinate ``i`` deleted."""
    return tuple(s[:i]) + tuple(s[i + 1:])


def substitute(s: JointStrategy, i: int, v: int) -> tuple:
    """``(v, s_-i)``: ``s`` with player ``i``'s strategy replaced by ``v``."""
    return tuple(s[:i]) + (v,) + tuple(s[i + 1:])


def is_nash(g: Game, s: JointStrategy) -> bool:
    for i in range(g.n):
        if g.order(i, opponents_of(s, i))[0] != s[i]:
            return False
    return True


def nash_equilibria(g: Game, limit: int | None = None) -> set:
    """All pure Nash equilibria by exhaustive enumeration."""
    total = prod(g.sizes)
    ceiling = max_outcomes(limit)
    if total > ceiling:
        raise SizeLimitError(f"{total} joint strategies exceeds the limit of {ceiling}")
    mask = kernels.top_mask(*g.packed.arrays())
    return {decode(int(c), g.sizes) for c in np.flatnonzero(mask)}


def cpnet_to_game(net: CPNet) -> Game:
    """Game whose player ``i`` ranks its strategies by ``X_i``'s table row."""
    sizes = net.sizes
    prefs = []
    for i in range(net.n):
        opp = [j for j in range(net.n) if j != i]
        opp_sizes = [sizes[j] for j in opp]
        profiles = np.indices(opp_sizes).reshape(len(opp), -1) if opp else np.zeros((0, 1), dtype=int)
        cols = [opp.index(p) for p in net.parents[i]]
        if cols:
            keys = np.ravel_multi_index(tuple(profiles[cols]), net.parent_sizes(i))
        else:
            keys = np.zeros(profiles.shape[1], dtype=np.int64)
        prefs.append(tuple(net.rows[i][k] for k in keys.tolist()))
    return Game(net.names, net.domains, tuple(prefs))


def game_to_cpnet(g: Game, max_rows: int = DEFAULT_MAX_TABLE_ROWS) -> CPNet:
    """Full-parent CP-net: every variable's parents are all other variables."""
    for i in range(g.n):
        rows = prod(g.opponent_sizes(i))
        if rows > max_rows:
            raise SizeLimitError(f"table for {g.players[i]} needs {rows} rows, limit {max_rows}")
    parents = tuple(tuple(j for j in range(g.n) if j != i) for i in range(g.n))
    return CPNet(tuple(g.players), tuple(g.strategies), parents, tuple(g.prefs))


def games_equal(g1: Game, g2: Game) -> bool:
    return (tuple(g1.players) == tuple(g2.players)
            and tuple(map(tuple, g1.strategies)) == tuple(map(tuple, g2.strategies))
            and tuple(g1.prefs) == tuple(g2.prefs))


def from_payoffs(players, strategies, payoffs: dict) -> Game:
    """Convert numeric payoffs to parametrized preferences.

    ``payoffs`` maps every joint strategy (index tuple) to one payoff per
    player.  Within each opponent profile a player's strategies are ranked by
    descending payoff; equal payoffs raise ``InvalidGameError``.
    """
    sizes = tuple(len(s) for s in strategies)
    n = len(sizes)
    missing = [s for s in np.ndindex(*sizes) if tuple(s) not in payoffs]
    if missing:
        names = ", ".join(str(tuple(strategies[i][v] for i, v in enumerate(s))) for s in missing[:3])
        raise InvalidGameError(f"payoffs missing for {len(missing)} joint strategies, e.g. {names}")
    prefs = []
    for i in range(n):
        opp_sizes = opponents_of(sizes, i)
        rows = []
        for code in range(prod(opp_sizes)):
            opp = decode(code, opp_sizes)
            values = [payoffs[opp[:i] + (v,) + opp[i:]][i] for v in range(sizes[i])]
            if len(set(values)) != len(values):
                profile = ", ".join(
                    f"{players[j]}={strategies[j][opp[k]]}"
                    for k, j in enumerate(j for j in range(n) if j != i))
                raise InvalidGameError(
                    f"tied payoffs for player {players[i]} at profile ({profile})")
            rows.append(tuple(sorted(range(sizes[i]), key=lambda v: -values[v])))
        prefs.append(tuple(rows))
    return check_game(Game(tuple(players), tuple(tuple(s) for s in strategies), tuple(prefs)))
