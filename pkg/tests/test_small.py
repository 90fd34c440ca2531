"""Hamilton cycles, linkage pairs, and the small-n sparsifier."""

import random

import pytest

from kspan.core import Digraph, Tournament, gen_k_connected, gen_random, mask_of
from kspan.errors import NotKConnected, NotStronglyConnected, TooSmall
from kspan.flows import _SplitMaxFlow, is_strongly_connected, is_strongly_k_connected
from kspan.small import (
    _biclique_pair,
    hamilton_cycle,
    linkage_pair,
    sparsify_small,
    validate_linkage_pair,
)

C3 = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def transitive(n):
    return Tournament.from_arcs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def is_spanning_cycle(d, t):
    return (
        d.arc_count() == t.n
        and d.is_subgraph_of(t)
        and all(d.out_degree(v) == 1 and d.in_degree(v) == 1 for v in range(t.n))
        and is_strongly_connected(d)
    )


def test_hamilton_three_cycle():
    assert hamilton_cycle(C3).arcs == C3.as_digraph().arcs


def test_hamilton_rejects():
    with pytest.raises(NotStronglyConnected):
        hamilton_cycle(transitive(5))
    with pytest.raises(NotStronglyConnected):
        hamilton_cycle(Tournament.from_arcs(2, [(0, 1)]))


def test_hamilton_corpus():
    rng = random.Random(5)
    done = 0
    while done < 60:
        n = rng.randint(3, 80)
        t = gen_random(n, rng.getrandbits(32))
        if not is_strongly_connected(t):
            continue
        assert is_spanning_cycle(hamilton_cycle(t), t)
        done += 1


def test_hamilton_exact_arc_count_large():
    t = gen_k_connected(100, 1, 3)
    assert hamilton_cycle(t).arc_count() == 100


def test_linkage_pair_too_small():
    with pytest.raises(TooSmall):
        linkage_pair(transitive(9), 2)


def test_linkage_pair_k1():
    t = gen_k_connected(12, 1, 2)
    lp = linkage_pair(t, 1)
    assert lp.branch == "degree"
    assert lp.x_side[0] == max(range(12), key=lambda v: (t.out_degree(v), -v))
    assert validate_linkage_pair(t, lp, 1)


def test_linkage_pair_corpus_with_flow_recheck():
    rng = random.Random(9)
    for _ in range(25):
        n = rng.randint(15, 50)
        k = rng.randint(1, 3)
        if n < 5 * k:
            continue
        t = gen_random(n, rng.getrandbits(32))
        lp = linkage_pair(t, k)
        assert validate_linkage_pair(t, lp, k)
        # randomized deletion audit: some certified path always survives
        for _ in range(40):
            cut = set(rng.sample(range(n), k - 1))
            for x in lp.x_side:
                for y in lp.y_side:
                    if x in cut or y in cut:
                        continue
                    assert any(
                        not (set(p.vertices) - {x, y}) & cut
                        for p in lp.certificate[(x, y)]
                    )
        # max-flow recheck: certified pairs have local connectivity >= the
        # number of internally disjoint certificate paths
        net = _SplitMaxFlow(t)
        for x in lp.x_side:
            for y in lp.y_side:
                assert net.local_connectivity(x, y) >= min(
                    len(lp.certificate[(x, y)]), k
                )


def test_biclique_extraction_on_planted_sides():
    # n = 12: sides {0,1} -> {2,3} form a directed complete bipartite
    # pattern; feed the extractor the residue a failing pair would hand it
    rng = random.Random(4)
    n = 12
    arcs = set()
    for u, v in ((0, 2), (0, 3), (1, 2), (1, 3)):
        arcs.add((u, v))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in arcs or (j, i) in arcs:
                continue
            arcs.add((i, j) if rng.random() < 0.5 else (j, i))
    t = Tournament.from_arcs(n, arcs)
    lp = _biclique_pair(t, 2, x_only=mask_of([2, 3]), y_only=mask_of([0, 1]), matching=[])
    assert lp.branch == "biclique"
    assert lp.x_side == (0, 1) and lp.y_side == (2, 3)
    assert validate_linkage_pair(t, lp, 2)
    # single-arc certificates survive any one deletion avoiding the endpoints
    for cut in range(4, n):
        for x in lp.x_side:
            for y in lp.y_side:
                assert not {cut} & (set(lp.certificate[(x, y)][0].vertices) - {x, y})


def test_degree_branch_always_fires_at_k1():
    # the top-degree pick provably certifies every pair when k = 1: a
    # shortfall would force an in-neighbour of the max-in-degree vertex to
    # beat it in in-degree
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(5, 24)
        t = gen_random(n, rng.getrandbits(32))
        assert linkage_pair(t, 1).branch == "degree"


def test_sparsify_small_tiny_returns_whole():
    t = gen_k_connected(8, 2, 1)
    d = sparsify_small(t, 2)
    assert d.arcs == t.as_digraph().arcs


def test_sparsify_small_three_cycle():
    d = sparsify_small(C3, 1)
    assert d.arc_count() <= 3 and is_strongly_connected(d)


def test_sparsify_small_validation_flag():
    with pytest.raises(NotKConnected):
        sparsify_small(transitive(12), 2, validate=True)


def test_sparsify_small_corpus():
    rng = random.Random(11)
    for _ in range(10):
        k = rng.choice((1, 2, 3))
        n = rng.randint(5 * k, 90)
        t = gen_k_connected(n, k, rng.getrandbits(32))
        d = sparsify_small(t, k)
        assert d.is_subgraph_of(t)
        assert d.arc_count() <= (5 * k - 2) * n + (5 * k) * (5 * k - 1) // 2
        assert is_strongly_k_connected(d, k), (n, k)
