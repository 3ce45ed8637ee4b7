import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cpnet.core import CPNet, build_net, validate
from cpnet.elimination import (
    DOMINATED,
    NBR,
    CyclicNetError,
    EliminationError,
    best_responses,
    eliminate,
    never_best_responses,
    random_policy,
    remove_value,
    solve_acyclic,
    strictly_dominated,
    unique_outcome,
)
from cpnet.generate import random_net
from cpnet.semantics import optimal_outcomes

import oracles


def values(net, x, idx):
    return {net.domains[x][v] for v in idx}


def statements(net):
    """Every preference statement as (owner, condition names, ranking names)."""
    out = set()
    for x in range(net.n):
        parents = net.parents[x]
        for key, combo in enumerate(itertools.product(*(net.domains[p] for p in parents))):
            cond = tuple(zip((net.names[p] for p in parents), combo))
            out.add((net.names[x], cond, tuple(net.domains[x][v] for v in net.rows[x][key])))
    return out


def test_best_responses(cyclic4):
    assert values(cyclic4, 0, best_responses(cyclic4, 0)) == {"a"}
    assert values(cyclic4, 1, best_responses(cyclic4, 1)) == {"b", "bbar"}
    assert values(cyclic4, 0, never_best_responses(cyclic4, 0)) == {"abar"}
    assert never_best_responses(cyclic4, 1) == set()


def test_single_row_best_response(acyclic4):
    assert best_responses(acyclic4, 0) == {acyclic4.rows[0][0][0]}


def test_three_value_never_best_response():
    net = build_net({"P": ["p", "q"], "X": ["v1", "v2", "v3"]}, {"X": ["P"]},
                    {"P": {(): "p > q"}, "X": {("p",): "v1 > v3 > v2", ("q",): "v2 > v3 > v1"}})
    assert values(net, 1, never_best_responses(net, 1)) == {"v3"}
    assert strictly_dominated(net, 1) == set()


def test_strictly_dominated(cyclic4):
    assert strictly_dominated(cyclic4, 0) == {(1, 0)}
    assert strictly_dominated(cyclic4, 1) == set()


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_dominated_subset_of_nbr(n, seed):
    net = random_net(n, (2, 3), seed=seed)
    binary = random_net(n, 2, seed=seed)
    for x in range(n):
        assert {d for d, _ in strictly_dominated(net, x)} <= never_best_responses(net, x)
        assert {d for d, _ in strictly_dominated(binary, x)} == never_best_responses(binary, x)


def test_remove_value_chain(cyclic4):
    before = statements(cyclic4)
    n1 = remove_value(cyclic4, 0, 1)
    gone = before - statements(n1)
    assert {(o, c) for o, c, _ in gone} == {
        ("A", (("D", "d"),)), ("A", (("D", "dbar"),)), ("B", (("A", "abar"),))}
    n2 = remove_value(n1, 1, 1)
    gone = statements(n1) - statements(n2)
    assert {(o, c, r) for o, c, r in gone} == {
        ("B", (("A", "a"),), ("b", "bbar")), ("C", (("B", "bbar"),), ("cbar", "c"))}
    assert validate(n1) == [] and validate(n2) == []


def test_remove_value_childless(acyclic4):
    n = remove_value(acyclic4, 3, 0)
    assert n.rows[:3] == acyclic4.rows[:3]
    assert n.domains[3] == ("dbar",) and n.rows[3] == ((0,), (0,))


def test_remove_last_value_refused():
    net = build_net({"X": ["x"]}, {}, {"X": {(): ["x"]}})
    with pytest.raises(EliminationError):
        remove_value(net, 0, 0)


def test_cyclic_elimination_chain(cyclic4):
    trace = eliminate(cyclic4, "dominated")
    assert trace.lines() == [
        "- A=abar (strictly-dominated)",
        "- B=bbar (strictly-dominated)",
        "- C=cbar (strictly-dominated)",
        "- D=dbar (strictly-dominated)",
    ]
    assert all(s.kind == DOMINATED and s.dominator == 0 for s in trace.steps)
    assert trace.final.domains == (("a",), ("b",), ("c",), ("d",))
    assert trace.final.outcome_names(unique_outcome(trace.final)) == ("a", "b", "c", "d")
    assert trace.replay() == trace.final


def test_empty_traces(twocycle):
    assert eliminate(twocycle, "nbr").steps == ()
    net = build_net({"X": ["x", "y"], "Y": ["u", "v"]}, {"X": ["Y"]},
                    {"X": {("u",): "x > y", ("v",): "y > x"}, "Y": {(): "u > v"}})
    only_x = CPNet(net.names, net.domains, ((1,), (0,)), (net.rows[0], ((0, 1), (1, 0))))
    trace = eliminate(only_x, "nbr")
    assert trace.steps == () and trace.final == only_x


def test_unique_outcome():
    assert unique_outcome(random_net(3, 2, seed=0)) is None
    single = build_net({"X": ["x"]}, {}, {"X": {(): ["x"]}})
    assert unique_outcome(single) == (0,)


def test_solve_acyclic_example(acyclic4):
    counter = {}
    assert acyclic4.outcome_names(solve_acyclic(acyclic4, counter)) == ("a", "b", "c", "d")
    assert counter["lookups"] == 4
    assert optimal_outcomes(acyclic4) == {solve_acyclic(acyclic4)}


def test_solve_acyclic_independent():
    net = random_net(5, 3, seed=3, max_parents=0)
    assert solve_acyclic(net) == tuple(net.rows[i][0][0] for i in range(5))


def test_solve_acyclic_rejects_cycles(cyclic4):
    with pytest.raises(CyclicNetError):
        solve_acyclic(cyclic4)


def names_of_set(net, outs):
    return {net.outcome_names(o) for o in outs}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32), st.sampled_from(["nbr", "dominated"]))
def test_soundness_confluence_replay(n, seed, kind):
    net = random_net(n, (2, 3), seed=seed)
    trace = eliminate(net, kind)
    assert names_of_set(net, optimal_outcomes(net)) == names_of_set(trace.final, oracles.optimal(trace.final))
    assert trace.replay() == trace.final
    assert all(validate(m) == [] for m in trace.nets())
    for k in range(5):
        assert eliminate(net, kind, random_policy(k)).final == trace.final


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32))
def test_acyclic_completeness(n, seed):
    net = random_net(n, (2, 3), acyclic=True, seed=seed)
    final = eliminate(net, "nbr").final
    assert all(len(d) == 1 for d in final.domains)
    sol = solve_acyclic(net)
    assert final.outcome_names(unique_outcome(final)) == net.outcome_names(sol)
    assert optimal_outcomes(net) == {sol}


def test_solve_acyclic_any_topological_order():
    rng = random.Random(2)
    for _ in range(30):
        net = random_net(5, 3, acyclic=True, rng=rng)
        # relabel: reverse the variable order, which changes the tie-broken topological order
        perm = list(reversed(range(net.n)))
        inv = {old: new for new, old in enumerate(perm)}
        shuffled = CPNet(tuple(net.names[i] for i in perm), tuple(net.domains[i] for i in perm),
                         tuple(tuple(inv[p] for p in net.parents[i]) for i in perm),
                         tuple(net.rows[i] for i in perm))
        a = net.outcome_names(solve_acyclic(net))
        b = shuffled.outcome_names(solve_acyclic(shuffled))
        assert a == tuple(reversed(b))


def test_kind_names():
    net = random_net(3, 3, seed=8)
    assert {s.kind for s in eliminate(net, NBR).steps} <= {NBR}
