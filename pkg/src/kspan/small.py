"""Fallback sparsifier for small vertex counts, plus the k = 1 shortcut.

For k = 1 a strongly connected tournament always carries a Hamilton
cycle, found here by path insertion followed by cycle absorption in
O(n^2).  For k >= 2 the fallback keeps a full copy of a 5k-vertex core
carrying a robust linkage pair (X, Y), a good spanning subgraph feeding
the core, and fans tying the ordering's boundary windows to X and Y;
the result has at most (5k - 2) n + C(5k, 2) arcs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Digraph, Path, Tournament, induced, iter_bits, mask_of
from .errors import InternalInvariant, NotKConnected, NotStronglyConnected, TooSmall
from .flows import is_strongly_connected, is_strongly_k_connected, k_fan
from .orderings import good_subgraph


def hamilton_cycle(t: Tournament) -> Digraph:
    """Spanning directed cycle of a strongly connected tournament."""
    n = t.n
    if n < 3:
        raise NotStronglyConnected("no directed cycle below three vertices")
    if not is_strongly_connected(t):
        raise NotStronglyConnected("tournament is not strongly connected")

    # Hamilton path by binary insertion.
    path = [0]
    for v in range(1, n):
        if t.has_arc(v, path[0]):
            path.insert(0, v)
        elif t.has_arc(path[-1], v):
            path.append(v)
        else:
            lo, hi = 0, len(path) - 1  # arc path[lo]->v, arc v->path[hi]
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if t.has_arc(path[mid], v):
                    lo = mid
                else:
                    hi = mid
            path.insert(lo + 1, v)

    # Initial cycle: close the longest prefix of the path.
    j = max(i for i in range(1, n) if t.has_arc(path[i], path[0]))
    cycle = path[: j + 1]
    rest = path[j + 1 :]

    # Absorb the remaining suffix.  Its head is always beaten by some cycle
    # vertex (its path predecessor sits on the cycle), so either a rotation
    # insertion point exists or the whole cycle beats it and a splice back
    # into the cycle must exist by strong connectivity.
    while rest:
        u = rest[0]
        m = len(cycle)
        spot = next(
            (
                i
                for i in range(m)
                if t.has_arc(cycle[i], u) and t.has_arc(u, cycle[(i + 1) % m])
            ),
            None,
        )
        if spot is not None:
            cycle.insert(spot + 1, u)
            rest.pop(0)
            continue
        hook = None
        for q in range(len(rest)):
            entry = next((i for i in range(m) if t.has_arc(rest[q], cycle[i])), None)
            if entry is not None:
                hook = (q, entry)
                break
        if hook is None:
            raise InternalInvariant("suffix cannot rejoin the cycle")
        q, entry = hook
        cycle = cycle[:entry] + rest[: q + 1] + cycle[entry:]
        rest = rest[q + 1 :]

    arcs = [(cycle[i], cycle[(i + 1) % n]) for i in range(n)]
    return Digraph.from_arcs(n, arcs)


@dataclass(frozen=True)
class LinkagePair:
    """Disjoint k-sets X, Y with per-pair certificates: internally disjoint
    x -> y paths that no k-1 vertex deletions can all block."""

    x_side: tuple[int, ...]
    y_side: tuple[int, ...]
    certificate: dict[tuple[int, int], tuple[Path, ...]]
    branch: str  # "degree" | "biclique"


def linkage_pair(t: Tournament, k: int) -> LinkagePair:
    """Find X, Y of size k such that every x in X reaches every y in Y even
    after any k-1 deletions avoiding x and y.

    First try X = top out-degrees, Y = top in-degrees (disjointified),
    certifying each pair with length-2 paths through the common
    neighbourhood plus length-3 paths through a maximum matching.  If some
    pair certifies short, maximality of its matching exposes a directed
    complete bipartite k x k pattern whose sides certify themselves with
    single arcs.
    """
    n = t.n
    if n < 5 * k:
        raise TooSmall(f"need at least {5 * k} vertices, got {n}")
    xs = sorted(range(n), key=lambda v: (-t.out_degree(v), v))[:k]
    ys = [v for v in sorted(range(n), key=lambda v: (-t.in_degree(v), v)) if v not in xs][:k]

    cert: dict[tuple[int, int], tuple[Path, ...]] = {}
    for x in xs:
        for y in ys:
            through = t.out_masks[x] & t.in_masks[y]
            x_only = t.out_masks[x] & ~t.in_masks[y] & ~(1 << y)
            y_only = t.in_masks[y] & ~t.out_masks[x] & ~(1 << x)
            paths = [Path((x, z, y)) for z in iter_bits(through)]
            matching: list[tuple[int, int]] = []
            if len(paths) < k:
                matching = _arc_matching(t, x_only, y_only)
                paths.extend(Path((x, w, w2, y)) for w, w2 in matching)
            if len(paths) < k:
                return _biclique_pair(t, k, x_only, y_only, matching)
            cert[(x, y)] = tuple(paths[:k])
    return LinkagePair(tuple(xs), tuple(ys), cert, "degree")


def _arc_matching(t: Tournament, left_mask: int, right_mask: int) -> list[tuple[int, int]]:
    """Greedy-then-augment maximum matching on arcs left -> right."""
    left = list(iter_bits(left_mask))
    right = list(iter_bits(right_mask))
    rindex = {v: i for i, v in enumerate(right)}
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for w in iter_bits(t.out_masks[u] & right_mask):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_r or try_augment(match_r[w], seen):
                match_l[u] = w
                match_r[w] = u
                return True
        return False

    for u in left:
        try_augment(u, set())
    return sorted(match_l.items())


def _biclique_pair(t: Tournament, k: int, x_only: int, y_only: int, matching) -> LinkagePair:
    used = mask_of(v for pair in matching for v in pair)
    from_side = y_only & ~used  # arcs leave this side
    to_side = x_only & ~used
    if from_side.bit_count() < k or to_side.bit_count() < k:
        raise InternalInvariant("biclique sides came up short")
    xs = sorted(iter_bits(from_side))[:k]
    ys = sorted(iter_bits(to_side))[:k]
    cert: dict[tuple[int, int], tuple[Path, ...]] = {}
    for x in xs:
        for y in ys:
            if not t.has_arc(x, y):
                raise InternalInvariant("missing biclique arc")
            cert[(x, y)] = (Path((x, y)),)
    return LinkagePair(tuple(xs), tuple(ys), cert, "biclique")


def validate_linkage_pair(t: Tournament, lp: LinkagePair, k: int) -> bool:
    """Record-level check of the linkage invariant.

    Each pair needs internally disjoint x -> y paths in t, and either k of
    them or one with no internal vertices, so no k-1 deletions avoiding
    the endpoints can block them all.
    """
    if len(set(lp.x_side)) != k or len(set(lp.y_side)) != k:
        return False
    if set(lp.x_side) & set(lp.y_side):
        return False
    for x in lp.x_side:
        for y in lp.y_side:
            paths = lp.certificate.get((x, y))
            if not paths:
                return False
            interiors: set[int] = set()
            for p in paths:
                if p.start != x or p.end != y or not p.is_path_in(t):
                    return False
                inner = set(p.vertices[1:-1])
                if inner & interiors or {x, y} & inner:
                    return False
                interiors.update(inner)
            if len(paths) < k and all(len(p) > 2 for p in paths):
                return False
    return True


def sparsify_small(t: Tournament, k: int, *, validate: bool = False) -> Digraph:
    """Strongly k-connected spanning subgraph with at most
    (5k - 2) n + C(5k, 2) arcs.

    Below 5k vertices the whole tournament is returned.  Otherwise the
    5k lowest-id vertices form the core: all of its arcs are kept, a good
    spanning subgraph funnels every vertex into the ordering's boundary
    windows, and fans connect those windows to the core's linkage pair.
    """
    n = t.n
    if validate:
        ok, witness = is_strongly_k_connected(t, k, return_witness=True)
        if not ok:
            raise NotKConnected(f"input is not strongly {k}-connected", witness)
    if n < 5 * k:
        return t.as_digraph()

    core = tuple(range(5 * k))
    sub, vmap = induced(t, core)
    lp = linkage_pair(sub, k)
    x_glob = tuple(vmap[v] for v in lp.x_side)
    y_glob = tuple(vmap[v] for v in lp.y_side)

    good = good_subgraph(t, k, 0)
    sigma = good.sigma

    arcs: set[tuple[int, int]] = set(good.digraph.arcs)
    for u in core:
        row = t.out_masks[u]
        for v in core:
            if (row >> v) & 1:
                arcs.add((u, v))
    for pos in range(n - 2 * k + 2, n + 1):
        v = sigma.vertex_at(pos)
        fan = k_fan(t, v, x_glob, k, "from-center")
        arcs.update(fan.arcs())
    for pos in range(1, 2 * k):
        v = sigma.vertex_at(pos)
        fan = k_fan(t, v, y_glob, k, "to-center")
        arcs.update(fan.arcs())

    result = Digraph(n, frozenset(arcs))
    bound = (5 * k - 2) * n + (5 * k) * (5 * k - 1) // 2
    if result.arc_count() > bound:
        raise InternalInvariant("small sparsifier exceeded its arc bound")
    return result
