"""Q-orderings, matching extraction, and sparse good spanning subgraphs.

An ordering sigma of an oriented graph D is *Q_s-good* when every vertex
has, inside any window ahead of it (resp. behind it), at least
(window - s) / 2 out-neighbours (resp. in-neighbours).  A (sigma, k, t)
*good* digraph keeps only sigma-forward arcs, with out-degree >= k except
in the last t positions and in-degree >= k except in the first t.

The ordering search runs a deterministic warm start (repeated best
single-vertex reinsertion, which strictly increases the forward-arc
count) and then repairs remaining violations with the canonical move:
lexicographically first violating pair, out-condition checked before the
in-condition, shift the offending vertex across its window.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import Digraph, Ordering, Path, iter_bits
from .errors import DegreeTooLow, InternalInvariant, MatchingDeficit, Stuck
from .flows import adjacency_bool_matrix

_WARM_PASS_CAP = 40


@dataclass(frozen=True)
class QOrdering:
    sigma: Ordering
    s: int


@dataclass(frozen=True)
class GoodDigraph:
    """Spanning forward subgraph with the window degree guarantees."""

    digraph: Digraph
    sigma: Ordering
    k: int
    s: int

    @property
    def t(self) -> int:
        return 2 * self.k + self.s - 1

    @cached_property
    def positions(self) -> dict[int, int]:
        return {v: p for p, v in enumerate(self.sigma.perm, start=1)}


def _check_min_total_degree(d, s: int) -> None:
    n = d.n
    for v in range(n):
        if d.out_degree(v) + d.in_degree(v) < n - 1 - s:
            raise DegreeTooLow(
                f"vertex {v} has total degree {d.out_degree(v) + d.in_degree(v)}"
                f" < {n - 1 - s}"
            )


def _warm_start(ai: np.ndarray) -> list[int]:
    """Greedy best-reinsertion passes from a degree-sorted start.

    Every applied move strictly gains forward arcs; a local optimum has no
    improving single-vertex move, hence no Q-violations at all.  Passes
    are capped, the repair loop finishes whatever is left.
    """
    n = ai.shape[0]
    deg = ai.sum(axis=1)
    perm = np.lexsort((np.arange(n), -deg)).astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[perm] = np.arange(n)
    for _ in range(_WARM_PASS_CAP):
        moved = False
        for v in range(n):
            p = int(pos[v])
            order = np.delete(perm, p)
            delta = ai[order, v] - ai[v, order]
            gains = np.concatenate(([0], np.cumsum(delta)))
            bp = int(np.argmax(gains))
            if gains[bp] > 0:
                perm = np.insert(order, bp, v)
                lo, hi = (bp, p) if bp < p else (p, bp)
                pos[perm[lo : hi + 1]] = np.arange(lo, hi + 1)
                moved = True
        if not moved:
            break
    return [int(v) for v in perm]


def _violation_tables(a_pos: np.ndarray, s: int):
    """Boolean matrices of Q1/Q2 violations over 0-based position pairs."""
    n = a_pos.shape[0]
    span = np.arange(n)[None, :] - np.arange(n)[:, None]
    upper = span > 0
    c1 = np.cumsum(a_pos, axis=1, dtype=np.int32)
    s1 = c1 - np.diag(c1)[:, None]
    v1 = (2 * s1 < span - s) & upper
    c2 = np.cumsum(a_pos, axis=0, dtype=np.int32)
    head = np.vstack([np.zeros((1, n), dtype=np.int32), c2[:-1]])
    s2 = np.diag(c2)[None, :] - head
    v2 = (2 * s2 < span - s) & upper
    return v1, v2


def q_ordering(d, s: int) -> QOrdering:
    """Find an ordering satisfying both window conditions at defect s.

    Requires min total degree >= n - 1 - s; raises DegreeTooLow otherwise.
    The repair loop strictly increases the forward-arc count each round,
    so it terminates within C(n, 2) rounds.
    """
    _check_min_total_degree(d, s)
    n = d.n
    if n <= 1:
        return QOrdering(Ordering(tuple(range(n))), s)
    adj = adjacency_bool_matrix(d)
    ai = adj.astype(np.int16)
    perm = _warm_start(ai)
    max_rounds = n * (n - 1) // 2 + 1
    last_forward = -1
    for _ in range(max_rounds):
        p = np.asarray(perm)
        a_pos = adj[np.ix_(p, p)]
        forward = int(np.triu(a_pos, 1).sum())
        if forward <= last_forward:
            raise InternalInvariant("repair move failed to gain a forward arc")
        last_forward = forward
        v1, v2 = _violation_tables(a_pos, s)
        comb = v1 | v2
        flat = int(np.argmax(comb))
        if not comb.flat[flat]:
            return QOrdering(Ordering(tuple(perm)), s)
        i, j = divmod(flat, n)
        if v1[i, j]:
            perm = perm[:i] + perm[i + 1 : j + 1] + [perm[i]] + perm[j + 1 :]
        else:
            perm = perm[:i] + [perm[j]] + perm[i:j] + perm[j + 1 :]
    raise InternalInvariant("ordering repair exceeded its round budget")


def extract_matchings(h0_masks, k: int, s: int) -> list[list[tuple[int, int]]]:
    """Peel k arc-disjoint matchings off the auxiliary bipartite graph.

    ``h0_masks[i]`` is the right-neighbour bitmask of left node i.  Level
    ell must admit a maximum matching of size max(n - s - 2*ell - 1, 0);
    the matching is trimmed to exactly that size by dropping the pairs
    with the largest left index.  Raises MatchingDeficit when a level
    falls short, which signals a violated precondition.
    """
    masks = list(h0_masks)
    n = len(masks)
    out: list[list[tuple[int, int]]] = []
    for ell in range(k):
        target = max(n - s - 2 * ell - 1, 0)
        if target == 0:
            out.append([])
            continue
        pairs = _maximum_matching(masks, n)
        if len(pairs) < target:
            raise MatchingDeficit(
                f"level {ell}: maximum matching {len(pairs)} < required {target}"
            )
        pairs.sort()
        kept = pairs[:target]
        for i, j in kept:
            masks[i] &= ~(1 << j)
        out.append(kept)
    return out


def _maximum_matching(masks, n: int) -> list[tuple[int, int]]:
    if n == 0:
        return []
    nbytes = (n + 7) // 8
    rows = np.frombuffer(
        b"".join(m.to_bytes(nbytes, "little") for m in masks), dtype=np.uint8
    ).reshape(n, nbytes)
    bi = csr_matrix(np.unpackbits(rows, axis=1, bitorder="little")[:, :n])
    match = maximum_bipartite_matching(bi, perm_type="column")
    return [(i, int(j)) for i, j in enumerate(match) if j >= 0]


def good_subgraph(d, k: int, s: int) -> GoodDigraph:
    """Build a (sigma, k, 2k+s-1)-good spanning subgraph with at most
    k*n - k + s*k arcs.

    Construction: Q-ordering, then k peeled matchings of the forward-arc
    bipartite graph (giving the regular core with exactly
    k*n - k^2 - s*k arcs), then per-vertex forward-arc top-ups outside
    the boundary windows.  Below 2k + s vertices the empty digraph is
    vacuously good.
    """
    if k < 1 or s < 0:
        raise ValueError("need k >= 1 and s >= 0")
    _check_min_total_degree(d, s)
    n = d.n
    if n < 2 * k + s:
        return GoodDigraph(Digraph.empty(n), Ordering(tuple(range(n))), k, s)
    sigma = q_ordering(d, s).sigma
    perm = sigma.perm
    out_masks = d.out_masks

    # forward-arc masks in position space
    fwd = [0] * n
    for p in range(n):
        row = out_masks[perm[p]]
        m = 0
        for q in range(p + 1, n):
            if (row >> perm[q]) & 1:
                m |= 1 << q
        fwd[p] = m

    matchings = extract_matchings(fwd, k, s)
    d1_out = [0] * n
    d1_in = [0] * n
    for level in matchings:
        for p, q in level:
            d1_out[p] |= 1 << q
            d1_in[q] |= 1 << p
    d1_size = sum(m.bit_count() for m in d1_out)
    if d1_size != k * n - k * k - s * k:
        raise InternalInvariant("regular core has the wrong arc count")

    rev = [0] * n  # forward arcs *into* each position
    for p in range(n):
        m = fwd[p]
        while m:
            low = m & -m
            rev[low.bit_length() - 1] |= 1 << p
            m ^= low

    arcs: set[tuple[int, int]] = set()
    for level in matchings:
        for p, q in level:
            arcs.add((perm[p], perm[q]))
    for q in range(2 * k + s - 1, n):  # 1-based positions 2k+s .. n
        need = k - d1_in[q].bit_count()
        avail = rev[q] & ~d1_in[q]
        for _ in range(need):
            if not avail:
                raise InternalInvariant(f"position {q + 1}: not enough forward in-arcs")
            low = avail & -avail
            avail ^= low
            arcs.add((perm[low.bit_length() - 1], perm[q]))
    for p in range(n - 2 * k - s + 1):  # 1-based positions 1 .. n-2k-s+1
        need = k - d1_out[p].bit_count()
        avail = fwd[p] & ~d1_out[p]
        for _ in range(need):
            if not avail:
                raise InternalInvariant(f"position {p + 1}: not enough forward out-arcs")
            low = avail & -avail
            avail ^= low
            arcs.add((perm[p], perm[low.bit_length() - 1]))

    if len(arcs) > k * n - k + s * k:
        raise InternalInvariant("good subgraph exceeded its arc budget")
    return GoodDigraph(Digraph(n, frozenset(arcs)), sigma, k, s)


def audit_good_digraph(gd: GoodDigraph) -> None:
    """Direct check of the three goodness conditions plus the arc bound."""
    n = gd.digraph.n
    k, s, t = gd.k, gd.s, gd.t
    pos = gd.positions
    for u, v in gd.digraph.arcs:
        if pos[u] >= pos[v]:
            raise InternalInvariant(f"backward arc ({u}, {v})")
    for v in gd.sigma.window(1, n - t):
        if gd.digraph.out_degree(v) < k:
            raise InternalInvariant(f"vertex {v} under out-degree {k}")
    for v in gd.sigma.window(t + 1, n):
        if gd.digraph.in_degree(v) < k:
            raise InternalInvariant(f"vertex {v} under in-degree {k}")
    if gd.digraph.arc_count() > k * n - k + s * k:
        raise InternalInvariant("arc budget exceeded")


def tail_path(gd: GoodDigraph, blocked, v: int, direction: str = "out") -> Path:
    """Greedy escape path in the good digraph avoiding ``blocked``.

    ``out``: from v to the last-t window, stepping along forward arcs;
    ``in``: from the first-t window to v, found by walking backwards.
    The window degree guarantees make the walk succeed whenever
    |blocked| < k and v is not blocked; Stuck signals a broken input.
    """
    n = gd.digraph.n
    t = gd.t
    blocked = set(blocked)
    if v in blocked:
        raise ValueError("v must not be blocked")
    if len(blocked) > gd.k - 1:
        raise ValueError("blocked set must have fewer than k vertices")
    pos = gd.positions
    walk = [v]
    if direction == "out":
        masks = gd.digraph.out_masks
        while pos[walk[-1]] <= n - t:
            options = [u for u in iter_bits(masks[walk[-1]]) if u not in blocked]
            if not options:
                raise Stuck(f"no usable forward arc out of {walk[-1]}")
            walk.append(min(options))
        return Path(tuple(walk))
    if direction == "in":
        masks = gd.digraph.in_masks
        while pos[walk[-1]] > t:
            options = [u for u in iter_bits(masks[walk[-1]]) if u not in blocked]
            if not options:
                raise Stuck(f"no usable forward arc into {walk[-1]}")
            walk.append(min(options))
        return Path(tuple(reversed(walk)))
    raise ValueError(f"unknown direction {direction!r}")
