"""Connectivity certification, fans, and disjoint path systems."""

import itertools
import random

import pytest

from kspan.core import Digraph, Path, Tournament, gen_random, iter_bits
from kspan.errors import NoFan, NoLinkage
from kspan.flows import (
    check_backwards_transitive,
    is_strongly_connected,
    is_strongly_k_connected,
    k_fan,
    min_disjoint_paths,
    validate_fan,
    validate_path_system,
)

from helpers import (
    brute_strongly_k_connected,
    exhaustive_min_disjoint_total,
    scc_connected,
)

C3 = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
PALEY7 = Tournament.from_arcs(7, [(i, (i + d) % 7) for i in range(7) for d in (1, 2, 4)])


def transitive(n):
    return Tournament.from_arcs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_is_strongly_connected_examples():
    assert is_strongly_connected(C3)
    assert not is_strongly_connected(transitive(4))
    assert is_strongly_connected(Digraph.from_arcs(1, []))
    assert not is_strongly_connected(Digraph.from_arcs(2, [(0, 1)]))


def test_strong_connectivity_matches_closure_oracle():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(1, 9)
        arcs = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3}
        d = Digraph(n, frozenset(arcs))
        assert is_strongly_connected(d) == scc_connected(n, arcs)


def test_k_connectivity_examples():
    assert is_strongly_k_connected(C3, 1)
    ok, witness = is_strongly_k_connected(C3, 2, return_witness=True)
    assert not ok and witness is not None and len(witness) == 1
    assert not is_strongly_k_connected(transitive(5), 1)


def test_k_connectivity_brute_agreement_small():
    rng = random.Random(7)
    for _ in range(250):
        n = rng.randint(2, 8)
        if rng.random() < 0.4:
            d = gen_random(n, rng.getrandbits(32)).as_digraph()
        else:
            arcs = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.5}
            d = Digraph(n, frozenset(arcs))
        for k in range(1, 5):
            expected = brute_strongly_k_connected(d, k)
            assert is_strongly_k_connected(d, k, pairs="all") == expected
            assert is_strongly_k_connected(d, k, pairs="hub") == expected
            got, witness = is_strongly_k_connected(d, k, return_witness=True)
            assert got == expected
            if not got and witness is not None:
                assert len(witness) < k
                keep = [v for v in range(n) if v not in witness]
                idx = {v: i for i, v in enumerate(keep)}
                sub = {
                    (idx[u], idx[v])
                    for u in keep
                    for v in iter_bits(d.out_masks[u])
                    if v in idx
                }
                assert not scc_connected(len(keep), sub)


def test_fan_examples():
    fan = k_fan(C3, 0, [1, 2], 1, "from-center")
    assert [p.vertices for p in fan.paths] == [(0, 1)]
    fan = k_fan(PALEY7, 0, [3, 5, 6], 3, "from-center")
    assert validate_fan(PALEY7, fan, avoid={3, 5, 6})
    fan = k_fan(PALEY7, 0, [3, 5, 6], 3, "to-center")
    assert validate_fan(PALEY7, fan, avoid={3, 5, 6})
    # center inside the target set: trivial path appears
    fan = k_fan(PALEY7, 3, [3, 5, 6], 3, "from-center")
    assert Path((3,)) in fan.paths
    assert validate_fan(PALEY7, fan)


def test_fan_corpus():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(8, 40)
        t = gen_random(n, rng.getrandbits(32))
        k = rng.randint(1, 3)
        if not is_strongly_k_connected(t, k):
            continue
        u_size = rng.randint(k, min(n - 1, k + 4))
        targets = rng.sample(range(n), u_size)
        v = rng.choice([x for x in range(n)])
        for direction in ("from-center", "to-center"):
            fan = k_fan(t, v, targets, k, direction)
            assert validate_fan(t, fan, avoid=set(targets)), (n, k, v, targets, direction)
            assert len(fan.paths) == k


def test_fan_minimality_direct_arcs():
    # when v has arcs to k targets, the min fan uses them (total length k)
    t = transitive(6)
    fan = k_fan(t, 0, [3, 4, 5], 3, "from-center")
    assert fan.total_length == 3


def test_no_fan():
    with pytest.raises(NoFan):
        k_fan(transitive(4), 3, [0, 1], 2, "from-center")  # sink has no out-arcs
    with pytest.raises(NoFan):
        k_fan(C3, 0, [1], 2, "from-center")  # not enough targets


def test_min_disjoint_paths_examples():
    ps = min_disjoint_paths(C3, [0], [2], 1)
    assert [p.vertices for p in ps.paths] == [(0, 1, 2)]
    assert ps.total_length == 2
    ps = min_disjoint_paths(C3, [1], [1], 1)
    assert ps.total_length == 0 and ps.paths[0].vertices == (1,)
    with pytest.raises(NoLinkage):
        min_disjoint_paths(transitive(4), [3], [0], 1)


def test_min_disjoint_paths_exhaustive_minimum():
    rng = random.Random(3)
    done = 0
    while done < 60:
        n = rng.randint(4, 9)
        k = rng.randint(1, 2)
        t = gen_random(n, rng.getrandbits(32))
        if not is_strongly_k_connected(t, k):
            continue
        picks = rng.sample(range(n), 2 * k)
        sources, sinks = picks[:k], picks[k:]
        ps = min_disjoint_paths(t, sources, sinks, k)
        assert validate_path_system(t, ps, sources, sinks)
        best = exhaustive_min_disjoint_total(t, sources, sinks, k)
        assert best is not None and ps.total_length == best, (n, k, sources, sinks)
        done += 1


def test_backwards_transitive():
    assert check_backwards_transitive(C3, Path((0, 1)))
    assert check_backwards_transitive(C3, Path((0, 1, 2)))  # 2 -> 0 exists
    t = transitive(3)
    assert not check_backwards_transitive(t, Path((0, 1, 2)))  # 0 -> 2, forward
    assert check_backwards_transitive(t, Path((1,)))


def test_min_paths_are_backwards_transitive():
    rng = random.Random(19)
    done = 0
    while done < 40:
        n = rng.randint(6, 30)
        k = rng.randint(1, 3)
        t = gen_random(n, rng.getrandbits(32))
        if not is_strongly_k_connected(t, k):
            continue
        picks = rng.sample(range(n), 2 * k)
        ps = min_disjoint_paths(t, picks[:k], picks[k:], k)
        for p in ps.paths:
            assert check_backwards_transitive(t, p)
        done += 1
