import random

import pytest
from hypothesis import given, settings, strategies as st

from cpnet import semantics
from cpnet.core import SizeLimitError, build_net, lookup_order
from cpnet.generate import random_net
from cpnet.semantics import (
    IMPROVING,
    WORSENING,
    better,
    better_than,
    improving_flips,
    is_locally_optimal,
    is_optimal,
    optimal_outcomes,
    verify_witness,
    worsening_flips,
)

import oracles


def o(net, *values):
    return net.outcome_from_names(list(values))


def named(net, pairs):
    return [(net.names[f.variable], net.domains[f.variable][f.to_value], net.outcome_names(x))
            for f, x in pairs]


def test_worked_worsening_flip(acyclic4):
    flips = worsening_flips(acyclic4, o(acyclic4, "a", "b", "c", "d"))
    assert ("C", "cbar", ("a", "b", "cbar", "d")) in named(acyclic4, flips)


def test_worsening_flips_order(acyclic4):
    # abcd: every variable holds its top value, so each has exactly one worsening flip
    flips = worsening_flips(acyclic4, o(acyclic4, "a", "b", "c", "d"))
    assert [f.variable for f, _ in flips] == [0, 1, 2, 3]
    assert all(f.direction == WORSENING for f, _ in flips)


def test_no_flips_on_singleton_domains():
    net = build_net({"X": ["x"], "Y": ["y"]}, {"Y": ["X"]}, {"X": {(): ["x"]}, "Y": {("x",): ["y"]}})
    assert worsening_flips(net, (0, 0)) == []
    assert improving_flips(net, (0, 0)) == []


def test_twocycle_flips(twocycle):
    # from ab: B's row a: b > bbar lets B worsen; A's row b: abar > a lets A improve
    assert named(twocycle, worsening_flips(twocycle, o(twocycle, "a", "b"))) == [("B", "bbar", ("a", "bbar"))]
    assert named(twocycle, improving_flips(twocycle, o(twocycle, "a", "b"))) == [("A", "abar", ("abar", "b"))]


def test_improving_mirror_of_worked_flip(acyclic4):
    flips = improving_flips(acyclic4, o(acyclic4, "a", "b", "cbar", "d"))
    assert ("C", "c", ("a", "b", "c", "d")) in named(acyclic4, flips)


def test_single_variable_improving():
    net = build_net({"X": ["x", "y"]}, {}, {"X": {(): "x > y"}})
    assert named(net, improving_flips(net, (1,))) == [("X", "x", ("x",))]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_flip_mirror(n, seed):
    net = random_net(n, 2, seed=seed)
    for a in oracles.outcomes(net):
        for f, b in worsening_flips(net, a):
            assert (f.reversed(), a) in improving_flips(net, b)
            assert f.reversed().direction == IMPROVING
        for f, b in improving_flips(net, a):
            assert (f.reversed(), a) in worsening_flips(net, b)


def test_better_examples(acyclic4, twocycle):
    chain = better(acyclic4, o(acyclic4, "a", "b", "c", "d"), o(acyclic4, "abar", "b", "cbar", "dbar"))
    assert chain is not None and verify_witness(acyclic4, chain)
    cyc = better(twocycle, o(twocycle, "a", "b"), o(twocycle, "a", "b"))
    assert [twocycle.outcome_names(x) for x in cyc] == [
        ("a", "b"), ("a", "bbar"), ("abar", "bbar"), ("abar", "b"), ("a", "b")]


def test_better_absent_without_cycle(acyclic4):
    for x in oracles.outcomes(acyclic4):
        assert better(acyclic4, x, x) is None
    top = o(acyclic4, "a", "b", "c", "d")
    assert better(acyclic4, o(acyclic4, "abar", "b", "cbar", "dbar"), top) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32))
def test_better_matches_naive_closure(n, seed):
    net = random_net(n, (2, 3), seed=seed)
    rel = oracles.betterness(net)
    outs = oracles.outcomes(net)
    for a in outs:
        for b in outs:
            chain = better(net, a, b)
            assert (chain is not None) == ((a, b) in rel)
            if chain is not None:
                assert chain[0] == a and chain[-1] == b
                assert verify_witness(net, chain)
    assert semantics.betterness_relation(net) == rel


def test_better_is_shortest():
    rng = random.Random(5)
    for _ in range(20):
        net = random_net(3, 2, seed=rng.random())
        graph = oracles.worsening_graph(net)
        for a in graph:
            dist = {}
            frontier, d = list(graph[a]), 1
            while frontier:
                nxt = []
                for b in frontier:
                    if b not in dist:
                        dist[b] = d
                        nxt.extend(graph[b])
                frontier, d = nxt, d + 1
            for b, k in dist.items():
                assert len(better(net, a, b)) - 1 == k


def test_better_transitive_witnesses():
    rng = random.Random(11)
    for _ in range(20):
        net = random_net(3, 2, seed=rng.random())
        outs = oracles.outcomes(net)
        for a in outs:
            for b in outs:
                ab = better(net, a, b)
                if ab is None:
                    continue
                for c in outs:
                    bc = better(net, b, c)
                    if bc is not None:
                        joined = ab + bc[1:]
                        assert verify_witness(net, joined)
                        assert better(net, a, c) is not None


def test_verify_witness_rejects_bad_chains(acyclic4):
    top = o(acyclic4, "a", "b", "c", "d")
    assert not verify_witness(acyclic4, (top,))
    assert not verify_witness(acyclic4, (o(acyclic4, "a", "b", "cbar", "d"), top))
    assert not verify_witness(acyclic4, (top, o(acyclic4, "abar", "bbar", "c", "d")))


def test_optimality_examples(cyclic4, twocycle, acyclic4):
    abcd = o(cyclic4, "a", "b", "c", "d")
    assert is_optimal(cyclic4, abcd) and is_locally_optimal(cyclic4, abcd)
    for x in oracles.outcomes(twocycle):
        assert not is_optimal(twocycle, x)
        assert not is_locally_optimal(twocycle, x)
    assert not is_optimal(acyclic4, o(acyclic4, "abar", "b", "cbar", "dbar"))


def test_oracle_goldens(cyclic4, twocycle, acyclic4):
    # expected sets frozen from the naive closure oracle
    assert oracles.optimal(cyclic4) == {o(cyclic4, "a", "b", "c", "d")}
    assert oracles.optimal(twocycle) == set()
    assert oracles.optimal(acyclic4) == {o(acyclic4, "a", "b", "c", "d")}
    assert optimal_outcomes(cyclic4) == {(0, 0, 0, 0)}
    assert optimal_outcomes(twocycle) == set()
    assert optimal_outcomes(acyclic4) == {(0, 0, 0, 0)}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32), st.booleans())
def test_oracle_and_local_global_agreement(n, seed, acyclic):
    net = random_net(n, (2, 3), acyclic=acyclic, seed=seed)
    opt = optimal_outcomes(net)
    assert opt == oracles.optimal(net)
    for x in oracles.outcomes(net):
        assert is_optimal(net, x) == is_locally_optimal(net, x) == (x in opt)


def test_better_than_is_reverse_reachability(twocycle):
    ab = o(twocycle, "a", "b")
    assert better_than(twocycle, ab) == set(oracles.outcomes(twocycle))


def test_oracle_limit(monkeypatch):
    net = random_net(12, 2, seed=0)
    with pytest.raises(SizeLimitError):
        optimal_outcomes(net, limit=1000)
    monkeypatch.setenv("CPNET_MAX_OUTCOMES", "100")
    with pytest.raises(SizeLimitError):
        better(net, (0,) * 12, (1,) * 12)
    monkeypatch.setenv("CPNET_MAX_OUTCOMES", "5000")
    assert optimal_outcomes(net) == oracles.optimal(net)


def test_determinism():
    net = random_net(4, 3, seed=9)
    a = [named(net, worsening_flips(net, x)) for x in oracles.outcomes(net)]
    b = [named(net, worsening_flips(net, x)) for x in oracles.outcomes(net)]
    assert a == b
    assert sorted(optimal_outcomes(net)) == sorted(optimal_outcomes(net))


def test_flip_direction_consistent_with_rows():
    net = random_net(3, 3, seed=4)
    for x in oracles.outcomes(net):
        for f, y in worsening_flips(net, x):
            r = lookup_order(net, f.variable, x)
            assert r.index(f.to_value) > r.index(f.from_value)
