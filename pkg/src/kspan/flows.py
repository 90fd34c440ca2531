"""Menger-type machinery: vertex-capacitated flows, k-connectivity
certification, k-fans, and minimum-length vertex-disjoint path systems.

All vertex capacities are realized through the standard split gadget:
vertex v becomes v_in = 2v and v_out = 2v + 1 joined by a unit-capacity
arc, and every graph arc (u, v) becomes u_out -> v_in.  Unit max-flow
queries run through scipy's C implementation on a csr matrix built once
per digraph; minimum-cost flows (unit costs) use a dense successive
shortest path solver with potentials, which is exact for integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .core import Path, iter_bits
from .errors import NoFan, NoLinkage

_INF = 1 << 30


def adjacency_bool_matrix(g) -> np.ndarray:
    """n x n boolean matrix A with A[u, v] = (arc u -> v present)."""
    n = g.n
    nbytes = (n + 7) // 8
    rows = np.frombuffer(
        b"".join(m.to_bytes(nbytes, "little") for m in g.out_masks), dtype=np.uint8
    ).reshape(n, nbytes)
    return np.unpackbits(rows, axis=1, bitorder="little")[:, :n].astype(bool)


# ---------------------------------------------------------------------------
# strong connectivity


def _reachable_mask(masks: Sequence[int], start: int, n: int) -> int:
    seen = 1 << start
    frontier = [start]
    while frontier:
        u = frontier.pop()
        new = masks[u] & ~seen
        if new:
            seen |= new
            frontier.extend(iter_bits(new))
    return seen


def is_strongly_connected(d) -> bool:
    """True iff every vertex reaches every other (n = 1 counts)."""
    n = d.n
    if n == 1:
        return True
    full = (1 << n) - 1
    return (
        _reachable_mask(d.out_masks, 0, n) == full
        and _reachable_mask(d.in_masks, 0, n) == full
    )


# ---------------------------------------------------------------------------
# unit max-flow on the split network


class _SplitMaxFlow:
    """Reusable split network for local-connectivity queries on one digraph."""

    def __init__(self, g):
        self.n = g.n
        n = g.n
        srcs, dsts = [], []
        for v in range(n):
            srcs.append(2 * v)
            dsts.append(2 * v + 1)
        for u in range(n):
            for v in iter_bits(g.out_masks[u]):
                srcs.append(2 * u + 1)
                dsts.append(2 * v)
        data = np.ones(len(srcs), dtype=np.int32)
        self.csr = csr_matrix((data, (srcs, dsts)), shape=(2 * n, 2 * n))
        self.out_masks = g.out_masks

    def local_connectivity(self, u: int, v: int) -> int:
        """Max number of internally disjoint u -> v paths (direct arc counts)."""
        return int(maximum_flow(self.csr, 2 * u + 1, 2 * v).flow_value)

    def min_vertex_cut(self, u: int, v: int) -> frozenset[int]:
        """A minimum u, v vertex cut; only meaningful when no arc u -> v."""
        return _unit_cut_py(self.out_masks, self.n, u, v)


def _unit_cut_py(out_masks: Sequence[int], n: int, s: int, t: int) -> frozenset[int]:
    """BFS augmenting max-flow on the split network, returning the cut set.

    Pure-python fallback used only on failing pairs, so speed is not a
    concern; it recomputes the flow from scratch.
    """
    nn = 2 * n
    adj: list[set[int]] = [set() for _ in range(nn)]
    for v in range(n):
        adj[2 * v].add(2 * v + 1)
    for u in range(n):
        for v in iter_bits(out_masks[u]):
            adj[2 * u + 1].add(2 * v)
    src, snk = 2 * s + 1, 2 * t

    def bfs() -> list[int] | None:
        parent = [-1] * nn
        parent[src] = src
        queue = [src]
        while queue:
            nxt = []
            for a in queue:
                for b in adj[a]:
                    if parent[b] == -1:
                        parent[b] = a
                        if b == snk:
                            return parent
                        nxt.append(b)
            queue = nxt
        return None

    while True:
        parent = bfs()
        if parent is None:
            break
        b = snk
        while b != src:
            a = parent[b]
            adj[a].discard(b)
            adj[b].add(a)
            b = a
    # residual reachability from src; cut = split arcs crossing the frontier
    seen = [False] * nn
    seen[src] = True
    queue = [src]
    while queue:
        a = queue.pop()
        for b in adj[a]:
            if not seen[b]:
                seen[b] = True
                queue.append(b)
    cut = frozenset(v for v in range(n) if seen[2 * v] and not seen[2 * v + 1])
    return cut


# ---------------------------------------------------------------------------
# strong k-connectivity


def is_strongly_k_connected(d, k: int, *, return_witness: bool = False, pairs: str = "auto"):
    """Decide strong k-connectivity: |V| >= k+1 and no separator of size < k.

    Exact for every input.  ``pairs`` picks the certified pair family:

    * ``"all"``    -- every ordered non-adjacent pair (a pair joined by an
      arc cannot be separated, so skipping it is sound);
    * ``"hub"``    -- both directions between a fixed k-set and everyone,
      which is sufficient because any separator S misses some hub f, and a
      broken pair (a, b) would force a--f or f--b to break too;
    * ``"auto"``   -- "all" on dense inputs (cheap common-neighbour
      certificates settle almost every pair), "hub" on sparse ones.

    Per-pair work: the common-neighbourhood count |N+(u) & N-(v)| counts
    internally disjoint length-2 paths and so lower-bounds the local
    connectivity; only deficient pairs pay for an exact max-flow.  On
    failure the witness is a separating set of size below k (None when the
    graph is just too small).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = d.n
    fail = (False, None) if return_witness else False
    if n < k + 1:
        return fail
    if not is_strongly_connected(d):
        return (False, frozenset()) if return_witness else False
    if k == 1:
        return (True, None) if return_witness else True

    out, inn = d.out_masks, d.in_masks
    for v in range(n):
        if out[v].bit_count() < k:
            return (False, frozenset(iter_bits(out[v]))) if return_witness else False
        if inn[v].bit_count() < k:
            return (False, frozenset(iter_bits(inn[v]))) if return_witness else False

    if pairs == "auto":
        arc_count = sum(m.bit_count() for m in out)
        pairs = "all" if arc_count * 2 >= n * (n - 1) // 2 else "hub"

    if pairs == "all":
        pair_iter = (
            (u, v)
            for u in range(n)
            for v in range(n)
            if u != v and not (out[u] >> v) & 1
        )
    elif pairs == "hub":
        hubs = range(k)
        pair_iter = (
            p
            for f in hubs
            for u in range(n)
            if u != f
            for p in ((u, f), (f, u))
            if not (out[p[0]] >> p[1]) & 1
        )
    else:
        raise ValueError(f"unknown pair family {pairs!r}")

    net = None
    for u, v in pair_iter:
        if (out[u] & inn[v]).bit_count() >= k:
            continue
        if net is None:
            net = _SplitMaxFlow(d)
        if net.local_connectivity(u, v) < k:
            if return_witness:
                cut = net.min_vertex_cut(u, v)
                return (False, cut)
            return False
    return (True, None) if return_witness else True


# ---------------------------------------------------------------------------
# dense min-cost flow (unit costs, unit vertex capacities)


class _DenseMinCostFlow:
    """Successive shortest augmenting paths with potentials, dense numpy form.

    Node layout: v_in = 2v, v_out = 2v + 1, source = 2n, sink = 2n + 1.
    Costs are small nonnegative ints on forward arcs, so reduced costs stay
    nonnegative and plain Dijkstra (dense argmin form) is exact.
    """

    def __init__(self, n: int):
        self.n = n
        self.N = 2 * n + 2
        self.src = 2 * n
        self.snk = 2 * n + 1
        self.cap = np.zeros((self.N, self.N), dtype=np.int32)
        self.cost = np.zeros((self.N, self.N), dtype=np.int32)
        self.flow = np.zeros((self.N, self.N), dtype=np.int32)

    def add_graph_arcs(self, adj: np.ndarray) -> None:
        """Install u_out -> v_in unit arcs of cost 1 for every true adj[u, v]."""
        n = self.n
        even = 2 * np.arange(n)
        odd = even + 1
        a = adj.astype(np.int32)
        self.cap[np.ix_(odd, even)] = a  # rows u_out, cols v_in
        self.cost[np.ix_(odd, even)] = a
        self.cost[np.ix_(even, odd)] = -a.T

    def add_splits(self, vertices: Iterable[int]) -> None:
        vs = np.fromiter(vertices, dtype=np.int64)
        if vs.size:
            self.cap[2 * vs, 2 * vs + 1] = 1

    def add_source_arcs(self, nodes: Iterable[int]) -> None:
        for a in nodes:
            self.cap[self.src, a] = 1

    def add_sink_arcs(self, nodes: Iterable[int]) -> None:
        for a in nodes:
            self.cap[a, self.snk] = 1

    def forbid_into(self, vertices: Iterable[int]) -> None:
        vs = np.fromiter(vertices, dtype=np.int64)
        if vs.size:
            self.cap[:, 2 * vs] = 0

    def forbid_out_of(self, vertices: Iterable[int]) -> None:
        vs = np.fromiter(vertices, dtype=np.int64)
        if vs.size:
            self.cap[2 * vs + 1, :] = 0

    def forbid_vertex(self, v: int) -> None:
        self.cap[:, 2 * v] = 0
        self.cap[2 * v, :] = 0
        self.cap[:, 2 * v + 1] = 0
        self.cap[2 * v + 1, :] = 0

    def run(self, want: int) -> int:
        """Push up to ``want`` units; returns the number achieved."""
        N, src, snk = self.N, self.src, self.snk
        pi = np.zeros(N, dtype=np.int64)
        cost = self.cost.astype(np.int64)
        pushed = 0
        for _ in range(want):
            dist = np.full(N, _INF, dtype=np.int64)
            parent = np.full(N, -1, dtype=np.int64)
            done = np.zeros(N, dtype=bool)
            dist[src] = 0
            while True:
                masked = np.where(done, _INF, dist)
                u = int(masked.argmin())
                if masked[u] >= _INF:
                    break
                if u == snk:
                    break
                done[u] = True
                nd = dist[u] + cost[u] + pi[u] - pi
                relax = (self.cap[u] > 0) & ~done & (nd < dist)
                dist[relax] = nd[relax]
                parent[relax] = u
            if dist[snk] >= _INF:
                return pushed
            pi += np.minimum(dist, dist[snk])
            b = snk
            while b != src:
                a = int(parent[b])
                self.cap[a, b] -= 1
                self.cap[b, a] += 1
                if self.flow[b, a] > 0:
                    self.flow[b, a] -= 1
                else:
                    self.flow[a, b] += 1
                b = a
            pushed += 1
        return pushed

    def decompose_paths(self) -> list[list[int]]:
        """Split the integral flow into source-to-sink vertex paths.

        Unit costs make every optimal flow acyclic, so greedy walking
        (smallest successor node first, for determinism) terminates.
        """
        paths = []
        flow = self.flow
        while True:
            succ = np.nonzero(flow[self.src] > 0)[0]
            if succ.size == 0:
                return paths
            node = int(succ[0])
            flow[self.src, node] -= 1
            verts: list[int] = []
            while node != self.snk:
                v = node // 2
                if not verts or verts[-1] != v:
                    verts.append(v)
                nxt = int(np.nonzero(flow[node] > 0)[0][0])
                flow[node, nxt] -= 1
                node = nxt
            paths.append(verts)


# ---------------------------------------------------------------------------
# fans and disjoint path systems


@dataclass(frozen=True)
class Fan:
    """k paths joining ``center`` with ``targets``, pairwise sharing only
    the center, each meeting the target set only at its own endpoint."""

    center: int
    targets: tuple[int, ...]
    paths: tuple[Path, ...]
    direction: str  # "from-center" | "to-center"

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def total_length(self) -> int:
        return sum(p.length for p in self.paths)

    def arcs(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for p in self.paths:
            out.update(p.arcs())
        return out


@dataclass(frozen=True)
class PathSystem:
    """Pairwise vertex-disjoint paths (endpoints included)."""

    paths: tuple[Path, ...]

    @property
    def total_length(self) -> int:
        return sum(p.length for p in self.paths)

    def arcs(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for p in self.paths:
            out.update(p.arcs())
        return out

    def interior_vertices(self) -> set[int]:
        out: set[int] = set()
        for p in self.paths:
            out.update(p.vertices[1:-1])
        return out


def validate_fan(host, fan: Fan, avoid: set[int] | None = None) -> bool:
    """Record-level fan validity check; independent of how the fan was built.

    ``avoid`` optionally carries the full candidate set the fan was drawn
    from; paths may touch it only at their own endpoint (or at the center
    when the center itself belongs to it).
    """
    tset = set(fan.targets)
    if len(tset) != len(fan.targets):
        return False
    for i, p in enumerate(fan.paths):
        goal = fan.targets[i]
        ends = (fan.center, goal) if fan.direction == "from-center" else (goal, fan.center)
        if fan.center == goal:
            if p.vertices != (fan.center,):
                return False
        elif (p.start, p.end) != ends:
            return False
        if not p.is_path_in(host):
            return False
        meets = set(p.vertices) & tset
        if not meets <= {goal, fan.center}:
            return False
        if goal not in meets:
            return False
        if avoid is not None:
            extra = (set(p.vertices) & set(avoid)) - {goal, fan.center}
            if extra:
                return False
    for i in range(len(fan.paths)):
        for j in range(i + 1, len(fan.paths)):
            common = set(fan.paths[i].vertices) & set(fan.paths[j].vertices)
            if common != {fan.center}:
                return False
    return True


def validate_path_system(host, ps: PathSystem, sources, sinks) -> bool:
    if sorted(p.start for p in ps.paths) != sorted(sources):
        return False
    if sorted(p.end for p in ps.paths) != sorted(sinks):
        return False
    seen: set[int] = set()
    for p in ps.paths:
        if not p.is_path_in(host):
            return False
        if seen & set(p.vertices):
            return False
        seen.update(p.vertices)
    return True


def k_fan(d, v: int, targets, k: int, direction: str = "from-center") -> Fan:
    """Minimum-total-length k-fan between ``v`` and the set ``targets``.

    When v itself belongs to the set, the trivial one-vertex path is one
    of the k.  Raises NoFan when no fan exists (flow short of k), which
    also covers violated preconditions.
    """
    tset = sorted(set(targets))
    paths: list[Path] = []
    chosen: list[int] = []
    want = k
    if v in tset:
        paths.append(Path((v,)))
        chosen.append(v)
        tset.remove(v)
        want -= 1
    if want > len(tset):
        raise NoFan(f"target set too small for a {k}-fan")
    if want > 0:
        mcf = _DenseMinCostFlow(d.n)
        mcf.add_graph_arcs(adjacency_bool_matrix(d))
        mcf.add_splits(u for u in range(d.n) if u != v and u not in tset)
        if direction == "from-center":
            mcf.forbid_out_of(tset)
            mcf.forbid_into([v])
            mcf.cap[mcf.src, 2 * v + 1] = want
            mcf.add_sink_arcs(2 * u for u in tset)
        elif direction == "to-center":
            mcf.forbid_into(tset)
            mcf.forbid_out_of([v])
            mcf.add_source_arcs(2 * u + 1 for u in tset)
            mcf.cap[2 * v, mcf.snk] = want
        else:
            raise ValueError(f"unknown direction {direction!r}")
        got = mcf.run(want)
        if got < want:
            raise NoFan(f"only a {got + k - want}-fan exists (asked for {k})")
        for verts in mcf.decompose_paths():
            p = Path(tuple(verts))
            paths.append(p)
            chosen.append(p.end if direction == "from-center" else p.start)
    return Fan(center=v, targets=tuple(chosen), paths=tuple(paths), direction=direction)


def min_disjoint_paths(d, sources, sinks, k: int) -> PathSystem:
    """k pairwise vertex-disjoint source-to-sink paths of minimum total length.

    Endpoints are matched by the flow.  A vertex listed as both a source
    and a sink becomes its own trivial path.  Raises NoLinkage when fewer
    than k disjoint paths exist.
    """
    sources = list(sources)
    sinks = list(sinks)
    if len(sources) != k or len(sinks) != k:
        raise ValueError("need exactly k sources and k sinks")
    if len(set(sources)) != k or len(set(sinks)) != k:
        raise ValueError("sources and sinks must each be distinct")
    shared = sorted(set(sources) & set(sinks))
    paths = [Path((x,)) for x in shared]
    rest_sources = [s for s in sources if s not in shared]
    rest_sinks = [t for t in sinks if t not in shared]
    if rest_sources:
        mcf = _DenseMinCostFlow(d.n)
        mcf.add_graph_arcs(adjacency_bool_matrix(d))
        mcf.add_splits(range(d.n))
        for x in shared:
            mcf.forbid_vertex(x)
        mcf.add_source_arcs(2 * s for s in rest_sources)
        mcf.add_sink_arcs(2 * t + 1 for t in rest_sinks)
        got = mcf.run(len(rest_sources))
        if got < len(rest_sources):
            raise NoLinkage(f"only {got + len(shared)} disjoint paths exist (asked for {k})")
        for verts in mcf.decompose_paths():
            paths.append(Path(tuple(verts)))
    return PathSystem(tuple(paths))


def check_backwards_transitive(t, path: Path) -> bool:
    """True iff each path vertex beats every predecessor two or more hops back."""
    vs = path.vertices
    for i in range(2, len(vs)):
        for j in range(i - 1):
            if not t.has_arc(vs[i], vs[j]):
                return False
    return True
