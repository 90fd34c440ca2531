"""Independent brute-force oracles and corpus generators for the tests.

Everything here is deliberately naive: subset enumeration, transitive
closures, augmenting-path matching, exhaustive path search.  The oracles
never share code with the implementations they check.
"""

from __future__ import annotations

import itertools
import math
import random

from kspan.core import Digraph, Tournament, gen_random, iter_bits


def scc_connected(n: int, arcs: set[tuple[int, int]]) -> bool:
    """Strong connectivity by transitive closure (Floyd-Warshall style)."""
    if n <= 1:
        return True
    reach = [[False] * n for _ in range(n)]
    for u, v in arcs:
        reach[u][v] = True
    for w in range(n):
        rw = reach[w]
        for u in range(n):
            if reach[u][w]:
                ru = reach[u]
                for v in range(n):
                    if rw[v]:
                        ru[v] = True
    return all(reach[u][v] for u in range(n) for v in range(n) if u != v)


def brute_strongly_k_connected(d, k: int) -> bool:
    """Delete every vertex set of size < k and re-check strong connectivity."""
    n = d.n
    if n < k + 1:
        return False
    arcs = {(u, v) for u in range(n) for v in iter_bits(d.out_masks[u])}
    for r in range(k):
        for cut in itertools.combinations(range(n), r):
            keep = [v for v in range(n) if v not in cut]
            idx = {v: i for i, v in enumerate(keep)}
            sub = {(idx[u], idx[v]) for u, v in arcs if u in idx and v in idx}
            if not scc_connected(len(keep), sub):
                return False
    return True


def kuhn_maximum_matching_size(adj_masks) -> int:
    """Classic augmenting-path maximum bipartite matching (size only)."""
    n = len(adj_masks)
    match_right: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in iter_bits(adj_masks[u]):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_right or augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    size = 0
    for u in range(n):
        if augment(u, set()):
            size += 1
    return size


def all_simple_paths(d, src: int, dst: int, forbidden: set[int], cap: int):
    """Yield simple src->dst paths avoiding ``forbidden``, length <= cap."""
    stack = [(src, (src,))]
    while stack:
        u, path = stack.pop()
        if u == dst:
            yield path
            continue
        if len(path) - 1 >= cap:
            continue
        for w in iter_bits(d.out_masks[u]):
            if w in forbidden or w in path:
                continue
            stack.append((w, path + (w,)))


def exhaustive_min_disjoint_total(d, sources, sinks, k: int) -> int | None:
    """Minimum total length over all k-tuples of vertex-disjoint paths.

    Sources may be matched to sinks in any order.  Exponential; intended
    for n <= 10, k <= 2 only.  Returns None when no system exists.
    """
    best: int | None = None

    def rec(srcs, snks, used: set[int], total: int):
        nonlocal best
        if not srcs:
            if best is None or total < best:
                best = total
            return
        s = srcs[0]
        for t_i, t in enumerate(snks):
            cap = d.n if best is None else best - total
            for path in all_simple_paths(d, s, t, used - {s, t}, cap):
                if set(path) & (used - {s, t}):
                    continue
                if best is not None and total + len(path) - 1 >= best and len(srcs) > 1:
                    continue
                rec(srcs[1:], snks[:t_i] + snks[t_i + 1 :], used | set(path), total + len(path) - 1)

    rec(list(sources), list(sinks), set(sources) | set(sinks), 0)
    return best


def random_oriented_graph(n: int, s: int, seed: int) -> Digraph:
    """Oriented graph with min total degree >= n - 1 - s: start from a
    random tournament and delete pairs while both endpoints can afford it."""
    rng = random.Random(seed)
    t = gen_random(n, rng.getrandbits(32))
    arcs = {(u, v) for u in range(n) for v in iter_bits(t.out_masks[u])}
    losses = [0] * n
    pairs = list(arcs)
    rng.shuffle(pairs)
    for u, v in pairs:
        if s > 0 and losses[u] < s and losses[v] < s and rng.random() < 0.5:
            arcs.discard((u, v))
            losses[u] += 1
            losses[v] += 1
    return Digraph(n, frozenset(arcs))


def direct_q_audit(d, perm, s: int) -> bool:
    """Window conditions checked straight from the definitions."""
    n = d.n
    for i in range(n):
        for j in range(i + 1, n):
            ahead = perm[i + 1 : j + 1]
            cnt = sum(1 for u in ahead if d.has_arc(perm[i], u))
            if 2 * cnt < (j - i) - s:
                return False
            behind = perm[i:j]
            cnt = sum(1 for u in behind if d.has_arc(u, perm[j]))
            if 2 * cnt < (j - i) - s:
                return False
    return True


def direct_good_audit(gd) -> bool:
    """(sigma, k, t)-goodness checked straight from the definitions."""
    d, k, t = gd.digraph, gd.k, gd.t
    n = d.n
    perm = gd.sigma.perm
    pos = {v: i + 1 for i, v in enumerate(perm)}
    if any(pos[u] >= pos[v] for u, v in d.arcs):
        return False
    for p in range(1, n - t + 1):
        if d.out_degree(perm[p - 1]) < k:
            return False
    for p in range(t + 1, n + 1):
        if d.in_degree(perm[p - 1]) < k:
            return False
    return True


def audit_chain(t: Tournament, chain, ks=range(1, 6)) -> None:
    """Assert every stated chain property against its host tournament."""
    s = chain.size
    d = chain.d
    verts = chain.vertices
    assert len(set(verts)) == s
    # size bounds
    assert 0.5 * math.log2(d + 1) + 1 <= s <= 2.5 * math.log2(d + 1) + 2, (s, d)
    # transitivity, with the defining vertex at the right end
    for a in range(s):
        for b in range(a + 1, s):
            assert t.has_arc(verts[a], verts[b])
    # domination of the rest of the host
    members = set(verts)
    for u in range(t.n):
        if u in members:
            continue
        if chain.kind == "in":
            assert any(t.has_arc(u, c) for c in verts), (u, verts)
        else:
            assert any(t.has_arc(c, u) for c in verts), (u, verts)
    # level contraction
    lv = chain.levels
    assert lv[-1] == 0
    if d >= 1:
        assert lv[-2] == 1 if s >= 2 else True
        for i in range(s - 2):
            assert lv[i] / 4 <= lv[i + 1] <= 3 * lv[i] / 4, lv
    # Window degree floors; positions are 1-based along the transitive order.
    # At the defining vertex itself (position 1 for in-chains, s for
    # out-chains) only the forward side is backed by the level contraction,
    # and the other side genuinely fails when the root dominates its host;
    # interior positions get both sides.
    out_of = lambda v: (t.out_masks[v] & ~_mask(members)).bit_count()
    into = lambda v: (t.in_masks[v] & ~_mask(members)).bit_count()
    floor47 = 8 * d ** (1 / 7) - 1
    for i in range(1, s + 1):
        v = verts[i - 1]
        if chain.kind == "in":
            both = i >= 2
            if i <= s / 5 - 13:
                assert out_of(v) >= floor47
                assert not both or into(v) >= floor47
            for k in ks:
                if i <= s - 5 * math.log2(k) - 30:
                    assert out_of(v) >= 1000 * k * k
                    assert not both or into(v) >= 1000 * k * k
        else:
            both = i <= s - 1
            if i >= 4 * s / 5 + 14:
                assert into(v) >= floor47
                assert not both or out_of(v) >= floor47
            for k in ks:
                if i >= 5 * math.log2(k) + 31:
                    assert into(v) >= 1000 * k * k
                    assert not both or out_of(v) >= 1000 * k * k


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def all_tournaments(n: int):
    """Every labelled tournament on n vertices."""
    for bits in range(1 << (n * (n - 1) // 2)):
        yield Tournament(n, bits)
