"""Exact reasoning for CP-nets and strategic games with parametrized preferences."""
from .core import (
    CPNet,
    CPNetError,
    InvalidNetError,
    SizeLimitError,
    build_net,
    dependency_graph,
    is_acyclic,
    lookup_order,
    project,
    structurally_equal,
    validate,
)
from .elimination import (
    EliminationStep,
    EliminationTrace,
    best_responses,
    eliminate,
    never_best_responses,
    remove_value,
    solve_acyclic,
    strictly_dominated,
    unique_outcome,
)
from .formats import DocumentError, parse_cpnet, parse_game, serialize_cpnet, serialize_game
from .game import Game, cpnet_to_game, game_to_cpnet, games_equal, is_nash, nash_equilibria
from .reduction import drop_parent, is_reduced, reduce, redundant_parents
from .semantics import (
    better,
    improving_flips,
    is_locally_optimal,
    is_optimal,
    optimal_outcomes,
    worsening_flips,
)

__version__ = "0.1.0"
