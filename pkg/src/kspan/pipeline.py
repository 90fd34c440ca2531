"""End-to-end sparsifier: dispatch, staged construction, and verification.

The staged construction covers the large-n regime (k >= 2 and
n > 100 k log2(k+1)).  It builds, in order: extreme-degree sets X and Y;
3k-1 in-dominating chains rooted in X and 3k-1 out-dominating chains
rooted in Y, each on the residual host left by its predecessors; a
minimum-length vertex-disjoint backbone joining selected chain sinks to
selected chain sources; good spanning subgraphs on the parts of the
vertex partition V1, V1', V2, V3, V4; length-budgeted fans tying the
boundary windows of those orderings to the chain area; and short escape
paths from the windows into the chain sinks/sources.  Every claim-level
arc bound is asserted as it is built, and the assembled digraph is
re-verified with the flow-based certifier before being returned.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .chains import DominatingChain, chain_windows, in_dominating_chain, out_dominating_chain
from .core import Digraph, Ordering, Path, Tournament, induced, induced_digraph, iter_bits, mask_of, reverse
from .errors import InternalInvariant, NotKConnected
from .flows import (
    Fan,
    PathSystem,
    check_backwards_transitive,
    is_strongly_k_connected,
    k_fan,
    min_disjoint_paths,
    validate_fan,
)
from .orderings import GoodDigraph, good_subgraph
from .small import hamilton_cycle, sparsify_small

SCHEMA_VERSION = 1


def arc_bound(n: int, k: int) -> float:
    """The guaranteed output size: k*n + 750*k^2*log2(k+1)."""
    return k * n + 750.0 * k * k * math.log2(k + 1)


def small_regime(n: int, k: int) -> bool:
    return n <= 100.0 * k * math.log2(k + 1)


@dataclass
class SparsifyReport:
    n: int
    k: int
    branch: str
    arcs: int
    bound: float
    verified: bool
    ledger: dict
    wall_ms: float
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "n": self.n,
            "k": self.k,
            "branch": self.branch,
            "arcs": self.arcs,
            "bound": self.bound,
            "verified": self.verified,
            "ledger": self.ledger,
            "wall_ms": self.wall_ms,
        }


@dataclass
class SparsifyResult:
    digraph: Digraph
    report: SparsifyReport


@dataclass
class PipelineState:
    """Everything the staged construction accumulates; filled in order."""

    k: int
    n: int
    x_set: tuple[int, ...] = ()
    y_set: tuple[int, ...] = ()
    delta_plus: int = 0
    delta_minus: int = 0
    a_chains: list[DominatingChain] = field(default_factory=list)
    b_chains: list[DominatingChain] = field(default_factory=list)
    d_plus: list[int] = field(default_factory=list)
    d_minus: list[int] = field(default_factory=list)
    b_tails: list[tuple[int, ...]] = field(default_factory=list)
    b_heads: list[tuple[int, ...]] = field(default_factory=list)
    ab_mask: int = 0
    b_mask: int = 0
    head_mask: int = 0  # A united with every B head window
    b_chain_of: dict[int, int] = field(default_factory=dict)
    selected_a: tuple[int, ...] = ()
    selected_b: tuple[int, ...] = ()
    backbone: PathSystem | None = None
    v1: set[int] = field(default_factory=set)
    v1p: set[int] = field(default_factory=set)
    v2: set[int] = field(default_factory=set)
    v3: set[int] = field(default_factory=set)
    v4: set[int] = field(default_factory=set)
    e_sets: dict[str, set[tuple[int, int]]] = field(default_factory=dict)
    w_windows: dict[str, tuple[int, ...]] = field(default_factory=dict)
    ledger: dict = field(default_factory=dict)

    @property
    def log_term(self) -> float:
        return math.log2(self.k + 1)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InternalInvariant(msg)


# ---------------------------------------------------------------------------
# stages


def build_extreme_sets(t: Tournament, k: int) -> tuple[tuple[int, ...], tuple[int, ...], int, int]:
    """X: 3k-1 smallest out-degrees; Y: 3k-1 smallest in-degrees off X.

    Picking Y away from X keeps the two floors intact: every vertex off X
    still has out-degree >= max over X, and every vertex off Y (including
    X members, whose in-degrees are large) has in-degree >= max over Y.
    """
    m = 3 * k - 1
    xs = tuple(sorted(range(t.n), key=lambda v: (t.out_degree(v), v))[:m])
    x_set = set(xs)
    ys = tuple(
        v for v in sorted(range(t.n), key=lambda v: (t.in_degree(v), v)) if v not in x_set
    )[:m]
    delta_plus = max(t.out_degree(x) for x in xs)
    delta_minus = max(t.in_degree(y) for y in ys)
    return xs, ys, delta_plus, delta_minus


def build_chains(t: Tournament, st: PipelineState) -> None:
    """Grow the 3k-1 chains per side, each on its residual host.

    At every step the root with the most fresh neighbours is used first,
    which makes the recorded degree witnesses non-increasing.
    """
    k, n = st.k, t.n
    full = (1 << n) - 1
    x_mask, y_mask = mask_of(st.x_set), mask_of(st.y_set)
    a_union = 0
    remaining = list(st.x_set)
    for _ in range(3 * k - 1):
        pool = full & ~(x_mask | y_mask | a_union)
        best = min(remaining, key=lambda x: (-(t.out_masks[x] & pool).bit_count(), x))
        witness = (t.out_masks[best] & pool).bit_count()
        host_vertices = list(iter_bits(pool | (1 << best)))
        sub, vmap = induced(t, host_vertices)
        local = in_dominating_chain(sub, host_vertices.index(best))
        _require(local.d == witness, "chain witness degree mismatch")
        chain = DominatingChain(
            tuple(vmap[v] for v in local.vertices), "in", local.d, local.levels
        )
        st.a_chains.append(chain)
        st.d_plus.append(witness)
        a_union |= mask_of(chain.vertices)
        remaining.remove(best)

    b_union = 0
    remaining = list(st.y_set)
    for _ in range(3 * k - 1):
        pool = full & ~(x_mask | y_mask | a_union | b_union)
        best = min(remaining, key=lambda y: (-(t.in_masks[y] & pool).bit_count(), y))
        witness = (t.in_masks[best] & pool).bit_count()
        host_vertices = list(iter_bits(pool | (1 << best)))
        sub, vmap = induced(t, host_vertices)
        local = out_dominating_chain(sub, host_vertices.index(best))
        _require(local.d == witness, "chain witness degree mismatch")
        chain = DominatingChain(
            tuple(vmap[v] for v in local.vertices), "out", local.d, local.levels
        )
        st.b_chains.append(chain)
        st.d_minus.append(witness)
        b_union |= mask_of(chain.vertices)
        remaining.remove(best)

    _require(
        all(a >= b for a, b in zip(st.d_plus, st.d_plus[1:]))
        and all(a >= b for a, b in zip(st.d_minus, st.d_minus[1:]))
        and (not st.d_plus or st.d_plus[0] <= st.delta_plus)
        and (not st.d_minus or st.d_minus[0] <= st.delta_minus),
        "chain degree witnesses are not monotone",
    )

    for idx, chain in enumerate(st.b_chains):
        tail, head = chain_windows(chain, k)
        st.b_tails.append(tail)
        st.b_heads.append(head)
        for v in chain.vertices:
            st.b_chain_of[v] = idx

    st.b_mask = b_union
    st.ab_mask = a_union | b_union
    st.head_mask = a_union | mask_of(v for head in st.b_heads for v in head)

    ab_size = st.ab_mask.bit_count()
    cap = (6 * k - 2) * (2.5 * math.log2(st.delta_minus + 1) + 2)
    _require(ab_size <= cap, f"|A u B| = {ab_size} above its cap {cap:.1f}")
    _require(n - ab_size >= k, "fewer than k vertices outside the chain area")
    st.ledger["AB_size"] = {"value": ab_size, "bound": cap}


def build_backbone(t: Tournament, st: PipelineState) -> None:
    """Minimum-length disjoint paths from selected sinks to selected sources."""
    k = st.k
    a_sinks = [c.sink for c in st.a_chains]
    b_sources = [c.source for c in st.b_chains]
    sub_a, amap = induced(t, a_sinks)
    good_a = sorted(amap[i] for i in range(sub_a.n) if sub_a.in_degree(i) >= k)
    sub_b, bmap = induced(t, b_sources)
    good_b = sorted(bmap[i] for i in range(sub_b.n) if sub_b.out_degree(i) >= k)
    _require(len(good_a) >= k, "not enough high in-degree chain sinks")
    _require(len(good_b) >= k, "not enough high out-degree chain sources")
    system = min_disjoint_paths(t, good_a[:k], good_b[:k], k)
    for p in system.paths:
        _require(check_backwards_transitive(t, p), "backbone path admits a shortcut")
    st.selected_a = tuple(p.start for p in system.paths)
    st.selected_b = tuple(p.end for p in system.paths)
    st.backbone = system
    st.e_sets["E0"] = system.arcs()

    interiors = system.interior_vertices()
    ab = set(iter_bits(st.ab_mask))
    st.v1 = ab - interiors
    st.v1p = ab & interiors


def fan_to_ab(t: Tournament, st: PipelineState, v: int) -> Fan:
    """k-fan from outside the chain area into v, total length <= 70 k log2(k+1).

    Small delta-minus: a minimum-length flow fan (its interior stays inside
    the small chain area).  Large delta-minus: direct in-arcs, except for
    Y members, whose flow fan from outside Y gets each start relocated out
    of the chain area by one extra arc.
    """
    k, n = st.k, st.n
    full = (1 << n) - 1
    _require((st.ab_mask >> v) & 1 == 1, "fan target must sit in the chain area")
    if st.delta_minus <= 60 * k * k:
        fan = k_fan(t, v, list(iter_bits(full & ~st.ab_mask)), k, "to-center")
    elif not _in(mask_of(st.y_set), v):
        avail = t.in_masks[v] & ~st.ab_mask
        _require(avail.bit_count() >= k, "large-degree vertex lost its outside in-arcs")
        starts = _lowest_bits(avail, k)
        fan = Fan(v, tuple(starts), tuple(Path((u, v)) for u in starts), "to-center")
    else:
        base = k_fan(t, v, list(iter_bits(full & ~mask_of(st.y_set))), k, "to-center")
        used = mask_of(p.start for p in base.paths)
        paths = []
        for p in base.paths:
            w = p.start
            if _in(st.ab_mask, w):
                pool = t.in_masks[w] & ~st.ab_mask & ~used
                _require(pool != 0, "no fresh relocation vertex for fan start")
                w2 = pool & -pool
                used |= w2
                paths.append(Path((w2.bit_length() - 1,) + p.vertices))
            else:
                paths.append(p)
        fan = Fan(v, tuple(p.start for p in paths), tuple(paths), "to-center")
    budget = 70 * k * st.log_term
    _require(fan.total_length <= budget, f"in-fan length {fan.total_length} over {budget:.1f}")
    _require(validate_fan(t, fan), "invalid in-fan")
    _require(all(not _in(st.ab_mask, p.start) for p in fan.paths), "in-fan start inside chain area")
    return fan


def fan_from_ab(t: Tournament, st: PipelineState, v: int) -> Fan:
    """k-fan from v to outside the chain area, total length <= 100 k log2(k+1).

    First a fan to the complement of (A u B-heads), then ends still inside
    the chain area (tail vertices of long chains) are walked out along one
    or two fresh arcs whose existence the chain window guarantees.
    """
    k, n = st.k, st.n
    full = (1 << n) - 1
    _require((st.ab_mask >> v) & 1 == 1, "fan source must sit in the chain area")
    x_mask = mask_of(st.x_set)
    if st.delta_plus <= 100 * k * k:
        base = k_fan(t, v, list(iter_bits(full & ~st.head_mask)), k, "from-center")
    elif not _in(x_mask, v):
        avail = t.out_masks[v] & ~st.head_mask
        _require(avail.bit_count() >= k, "large-degree vertex lost its outside out-arcs")
        ends = _lowest_bits(avail, k)
        base = Fan(v, tuple(ends), tuple(Path((v, u)) for u in ends), "from-center")
    else:
        inner = k_fan(t, v, list(iter_bits(full & ~x_mask)), k, "from-center")
        used = mask_of(p.end for p in inner.paths)
        paths = []
        for p in inner.paths:
            u = p.end
            if _in(st.head_mask, u):
                pool = t.out_masks[u] & ~st.head_mask & ~used
                _require(pool != 0, "no fresh relocation vertex for fan end")
                u2 = pool & -pool
                used |= u2
                paths.append(Path(p.vertices + (u2.bit_length() - 1,)))
            else:
                paths.append(p)
        base = Fan(v, tuple(p.end for p in paths), tuple(paths), "from-center")

    fan = _relocate_fan_ends(t, st, base)
    budget = 100 * k * st.log_term
    _require(fan.total_length <= budget, f"out-fan length {fan.total_length} over {budget:.1f}")
    _require(validate_fan(t, fan), "invalid out-fan")
    _require(all(not _in(st.ab_mask, p.end) for p in fan.paths), "out-fan end inside chain area")
    return fan


def _relocate_fan_ends(t: Tournament, st: PipelineState, base: Fan) -> Fan:
    """Walk fan ends still inside the chain area out to fresh vertices.

    Ends can only be stuck in the tail part of a B chain.  Long chains
    whose end is not yet in the tail window hop into it first (the window
    is in the end's out-neighbourhood and its members keep many outside
    out-neighbours); everyone else leaves in a single arc.  All picks
    avoid every vertex already used by the fan.
    """
    k = st.k
    used = mask_of(x for p in base.paths for x in p.vertices)
    paths = []
    for p in base.paths:
        u = p.end
        if not _in(st.ab_mask, u):
            paths.append(p)  # already outside
            continue
        _require(_in(st.b_mask, u) and not _in(st.head_mask, u), "fan end stuck in a head window")
        li = st.b_chain_of[u]
        blen = st.b_chains[li].size
        tail_mask = mask_of(st.b_tails[li])
        if blen >= 18 * k + 80 and not _in(tail_mask, u):
            # hop into the tail window, then out of the chain area
            pool = t.out_masks[u] & tail_mask & ~used
            _require(pool != 0, "tail window exhausted")
            w = pool & -pool
            used |= w
            w_v = w.bit_length() - 1
            pool2 = t.out_masks[w_v] & ~st.ab_mask & ~used
            _require(pool2 != 0, "tail vertex lost its outside out-arcs")
            w2 = pool2 & -pool2
            used |= w2
            paths.append(Path(p.vertices + (w_v, w2.bit_length() - 1)))
        else:
            # tail member or short chain: one arc suffices
            pool = t.out_masks[u] & ~st.ab_mask & ~used
            _require(pool != 0, "chain vertex lost its outside out-arcs")
            w = pool & -pool
            used |= w
            paths.append(Path(p.vertices + (w.bit_length() - 1,)))
    return Fan(base.center, tuple(p.end for p in paths), tuple(paths), "from-center")


def _good_parts(t: Tournament, part, k: int, s: int, drop_arcs=None) -> tuple[set, GoodDigraph, tuple[int, ...]]:
    """Good subgraph of an induced part, translated back to global ids."""
    vs = tuple(sorted(part))
    if not vs:
        empty = GoodDigraph(Digraph.empty(0), Ordering(()), k, s)
        return set(), empty, ()
    if drop_arcs is None:
        sub, vmap = induced(t, vs)
        gd = good_subgraph(sub, k, s)
    else:
        sub_d, vmap = induced_digraph(t, vs)
        local_drop = set()
        idx = {v: i for i, v in enumerate(vmap)}
        for u, w in drop_arcs:
            if u in idx and w in idx:
                local_drop.add((idx[u], idx[w]))
        gd = good_subgraph(sub_d.minus_arcs(local_drop), k, s)
    arcs = {(vmap[u], vmap[w]) for u, w in gd.digraph.arcs}
    order = tuple(vmap[v] for v in gd.sigma.perm)
    return arcs, gd, order


def _window(order: tuple[int, ...], k: int, side: str) -> tuple[int, ...]:
    """First or last 2k-1 positions of a translated ordering."""
    w = 2 * k - 1
    return order[:w] if side == "first" else order[max(len(order) - w, 0) :]


def build_e1(t: Tournament, st: PipelineState) -> None:
    k = st.k
    e0 = st.e_sets["E0"]
    arcs1, _, order1 = _good_parts(t, st.v1, k, 0)
    arcs1p, _, order1p = _good_parts(t, st.v1p, k - 1, 2, drop_arcs=e0)
    w_minus = tuple(sorted(set(_window(order1, k, "first")) | set(_window(order1p, k, "first"))))
    w_plus = tuple(sorted(set(_window(order1, k, "last")) | set(_window(order1p, k, "last"))))
    st.w_windows["W1-"] = w_minus
    st.w_windows["W1+"] = w_plus

    e1 = set(arcs1) | set(arcs1p)
    fan_in_max = fan_out_max = 0
    for u in w_minus:
        fan = fan_to_ab(t, st, u)
        fan_in_max = max(fan_in_max, fan.total_length)
        e1 |= fan.arcs()
    for u in w_plus:
        fan = fan_from_ab(t, st, u)
        fan_out_max = max(fan_out_max, fan.total_length)
        e1 |= fan.arcs()
    st.e_sets["E1"] = e1

    touched = {x for arc in e1 for x in arc}
    st.v2 = touched - st.v1 - st.v1p
    bound = k * len(st.v1) + (k - 1) * len(st.v1p) + 680 * k * k * st.log_term
    _require(len(e1) <= bound, f"|E1| = {len(e1)} over {bound:.1f}")
    _require(len(st.v2) <= 8 * k * k, f"|V2| = {len(st.v2)} over {8 * k * k}")
    st.ledger["E1"] = {"arcs": len(e1), "bound": bound}
    st.ledger["V2_size"] = {"value": len(st.v2), "bound": 8 * k * k}
    st.ledger["fan_to_budget"] = {"value": fan_in_max, "bound": 70 * k * st.log_term}
    st.ledger["fan_from_budget"] = {"value": fan_out_max, "bound": 100 * k * st.log_term}


def build_e2(t: Tournament, st: PipelineState) -> None:
    k = st.k
    arcs, _, order = _good_parts(t, st.v2, k, 0)
    st.e_sets["E2"] = arcs
    st.w_windows["W2-"] = _window(order, k, "first")
    st.w_windows["W2+"] = _window(order, k, "last")
    bound = max(k * len(st.v2) - k, 0)
    _require(len(arcs) <= bound or not st.v2, f"|E2| = {len(arcs)} over {bound}")
    st.ledger["E2"] = {"arcs": len(arcs), "bound": bound}


def build_e3(t: Tournament, st: PipelineState) -> None:
    k = st.k
    assert st.backbone is not None
    interiors = st.backbone.interior_vertices()
    st.v3 = interiors - st.v1p - st.v2
    arcs, _, order = _good_parts(t, st.v3, k - 1, 2, drop_arcs=st.e_sets["E0"])
    st.e_sets["E3"] = arcs
    st.w_windows["W3-"] = _window(order, k, "first")
    st.w_windows["W3+"] = _window(order, k, "last")
    bound = (k - 1) * len(st.v3) + (k - 1)
    _require(len(arcs) <= bound, f"|E3| = {len(arcs)} over {bound}")
    st.ledger["E3"] = {"arcs": len(arcs), "bound": bound}


def build_e4(t: Tournament, st: PipelineState) -> None:
    k = st.k
    st.v4 = set(range(st.n)) - st.v1 - st.v1p - st.v2 - st.v3
    arcs, _, order = _good_parts(t, st.v4, k, 0)
    st.e_sets["E4"] = arcs
    st.w_windows["W4-"] = _window(order, k, "first")
    st.w_windows["W4+"] = _window(order, k, "last")
    bound = max(k * len(st.v4) - k, 0)
    _require(len(arcs) <= bound or not st.v4, f"|E4| = {len(arcs)} over {bound}")
    st.ledger["E4"] = {"arcs": len(arcs), "bound": bound}


def build_e5(t: Tournament, st: PipelineState) -> None:
    """Short escape paths: window vertices reach every chain sink within two
    arcs (domination plus transitivity), and dually from chain sources."""
    k = st.k
    w_plus = tuple(sorted(set(st.w_windows["W2+"]) | set(st.w_windows["W3+"]) | set(st.w_windows["W4+"])))
    w_minus = tuple(sorted(set(st.w_windows["W2-"]) | set(st.w_windows["W3-"]) | set(st.w_windows["W4-"])))
    st.w_windows["W+"] = w_plus
    st.w_windows["W-"] = w_minus
    _require(
        all(not _in(st.ab_mask, u) for u in w_plus + w_minus),
        "window vertex inside the chain area",
    )

    e5: set[tuple[int, int]] = set()
    a_sinks = [c.sink for c in st.a_chains]
    b_sources = [c.source for c in st.b_chains]
    for group in (a_sinks, b_sources):
        for u in group:
            for w in group:
                if u != w and t.has_arc(u, w):
                    e5.add((u, w))
    for u in w_plus:
        for chain in st.a_chains:
            sink = chain.sink
            if t.has_arc(u, sink):
                e5.add((u, sink))
                continue
            pool = t.out_masks[u] & mask_of(chain.vertices)
            _require(pool != 0, f"chain rooted at {chain.source} fails to dominate {u}")
            c = (pool & -pool).bit_length() - 1
            _require(t.has_arc(c, sink), "chain transitivity broken")
            e5.add((u, c))
            e5.add((c, sink))
    for u in w_minus:
        for chain in st.b_chains:
            source = chain.source
            if t.has_arc(source, u):
                e5.add((source, u))
                continue
            pool = t.in_masks[u] & mask_of(chain.vertices)
            _require(pool != 0, f"chain ending at {chain.sink} fails to dominate {u}")
            c = (pool & -pool).bit_length() - 1
            _require(t.has_arc(source, c), "chain transitivity broken")
            e5.add((source, c))
            e5.add((c, u))
    st.e_sets["E5"] = e5
    bound = 81 * k * k
    _require(len(e5) <= bound, f"|E5| = {len(e5)} over {bound}")
    st.ledger["E5"] = {"arcs": len(e5), "bound": bound}


def assemble_and_verify(t: Tournament, st: PipelineState) -> Digraph:
    k, n = st.k, st.n
    parts = [st.v1, st.v1p, st.v2, st.v3, st.v4]
    _require(sum(len(p) for p in parts) == n, "partition does not cover V")
    _require(len(set().union(*parts)) == n, "partition parts overlap")
    assert st.backbone is not None
    interiors = st.backbone.interior_vertices()
    _require(st.v1p | st.v3 | (st.v2 & interiors) == interiors, "interior bookkeeping broken")

    e0 = st.e_sets["E0"]
    v2_interior = len(st.v2 & interiors)
    # identity behind the final count: the backbone spends one arc per
    # vertex it touches, minus one per path
    _require(len(e0) == k + len(st.v1p) + len(st.v3) + v2_interior, "backbone arc identity broken")
    # the looser textbook bound |V1'|+|V2|+|V3|-k can miss by a hair when
    # fan endpoints land on backbone interiors; record it, don't enforce it
    e0_bound = len(st.v1p) + len(st.v2) + len(st.v3) - k
    st.ledger["E0"] = {
        "arcs": len(e0),
        "bound": e0_bound,
        "holds": len(e0) <= e0_bound,
        "v2_interior": v2_interior,
    }
    st.ledger["parts"] = {
        "V1": len(st.v1), "V1p": len(st.v1p), "V2": len(st.v2),
        "V3": len(st.v3), "V4": len(st.v4),
    }

    all_arcs: set[tuple[int, int]] = set()
    for key in ("E0", "E1", "E2", "E3", "E4", "E5"):
        all_arcs |= st.e_sets[key]
    d = Digraph(n, frozenset(all_arcs))
    _require(d.is_subgraph_of(t), "output is not a subgraph of the input")
    bound = arc_bound(n, k)
    _require(d.arc_count() <= bound, f"{d.arc_count()} arcs over the bound {bound:.1f}")
    if not is_strongly_k_connected(d, k):
        raise InternalInvariant("assembled digraph failed k-connectivity verification")
    return d


def _run_pipeline(t: Tournament, k: int) -> tuple[Digraph, PipelineState]:
    st = PipelineState(k=k, n=t.n)
    st.x_set, st.y_set, st.delta_plus, st.delta_minus = build_extreme_sets(t, k)
    _require(st.delta_minus >= st.delta_plus, "orientation with smaller in-degree floor")
    build_chains(t, st)
    build_backbone(t, st)
    build_e1(t, st)
    build_e2(t, st)
    build_e3(t, st)
    build_e4(t, st)
    build_e5(t, st)
    d = assemble_and_verify(t, st)
    return d, st


def sparsify(t: Tournament, k: int, *, skip_validation: bool = False) -> SparsifyResult:
    """Strongly k-connected spanning subgraph with at most
    k*n + 750*k^2*log2(k+1) arcs, plus a run report.

    Dispatch: k = 1 takes a Hamilton cycle; small n (<= 100 k log2(k+1))
    takes the 5k-core fallback; otherwise the staged construction runs,
    on the reversed tournament when its degree floors point that way.
    The output is always re-verified.
    """
    started = time.perf_counter()
    if k < 1:
        raise ValueError("k must be >= 1")
    if not skip_validation:
        ok, witness = is_strongly_k_connected(t, k, return_witness=True)
        if not ok:
            raise NotKConnected(f"input is not strongly {k}-connected", witness)

    ledger: dict = {}
    if k == 1:
        d = hamilton_cycle(t)
        branch = "hamilton-cycle"
        verified = is_strongly_k_connected(d, k)
    elif small_regime(t.n, k):
        d = sparsify_small(t, k)
        branch = "small"
        small_bound = (5 * k - 2) * t.n + (5 * k) * (5 * k - 1) // 2
        ledger["small_bound"] = {"arcs": d.arc_count(), "bound": small_bound}
        verified = is_strongly_k_connected(d, k)
    else:
        xs, ys, dp, dm = build_extreme_sets(t, k)
        if dm >= dp:
            d, st = _run_pipeline(t, k)
            branch = "pipeline"
        else:
            # reversal swaps the degree floors; separators are unchanged
            # by reversing every arc, so verifying the reversed output
            # certifies the returned one.
            d_rev, st = _run_pipeline(reverse(t), k)
            d = d_rev.reverse()
            branch = "pipeline-reversed"
        ledger = st.ledger
        verified = True  # assemble_and_verify already certified the output

    bound = arc_bound(t.n, k)
    _require(verified, "final verification failed")
    _require(d.arc_count() <= bound, "final arc bound failed")
    report = SparsifyReport(
        n=t.n,
        k=k,
        branch=branch,
        arcs=d.arc_count(),
        bound=bound,
        verified=verified,
        ledger=ledger,
        wall_ms=(time.perf_counter() - started) * 1e3,
    )
    return SparsifyResult(d, report)


def _in(mask: int, v: int) -> bool:
    return (mask >> v) & 1 == 1


def _lowest_bits(mask: int, count: int) -> list[int]:
    out = []
    while mask and len(out) < count:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
