"""Tournament and digraph containers, degree machinery, and generators.

Vertices are 0-based ints everywhere.  Neighbourhoods are kept as Python
int bitmasks (bit u of ``out_masks[v]`` set iff the arc v->u exists),
which keeps set algebra on neighbourhoods cheap even for dense inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import NotFound


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def pair_index(n: int, i: int, j: int) -> int:
    """Rank of the unordered pair (i, j), i < j, in row-major order."""
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _orientation_matrix(n: int, bits: int) -> np.ndarray:
    """n x n boolean matrix M with M[i, j] = (arc i -> j present)."""
    npairs = n * (n - 1) // 2
    raw = np.frombuffer(bits.to_bytes((npairs + 7) // 8, "little"), dtype=np.uint8)
    flat = np.unpackbits(raw, bitorder="little")[:npairs].astype(bool)
    upper = np.zeros((n, n), dtype=bool)
    upper[np.triu_indices(n, 1)] = flat  # triu_indices is row-major pair order
    return upper | np.tril(~upper.T, -1)


def _pack_rows(adj: np.ndarray) -> list[int]:
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits_from_matrix(adj: np.ndarray) -> int:
    flat = np.packbits(adj[np.triu_indices(len(adj), 1)], bitorder="little")
    return int.from_bytes(flat.tobytes(), "little")


@dataclass(frozen=True)
class Tournament:
    """Complete oriented graph on n vertices.

    ``bits`` packs one orientation bit per unordered pair (i, j) with
    i < j, in row-major order; bit 1 means the arc i -> j.
    """

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("tournament needs at least one vertex")
        if self.bits >> (self.n * (self.n - 1) // 2):
            raise ValueError("orientation bits out of range")

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        n = self.n
        if n <= 128:
            out = [0] * n
            bits = self.bits
            p = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if (bits >> p) & 1:
                        out[i] |= 1 << j
                    else:
                        out[j] |= 1 << i
                    p += 1
            return tuple(out)
        return tuple(_pack_rows(_orientation_matrix(n, self.bits)))

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        full = (1 << self.n) - 1
        return tuple((full ^ m) & ~(1 << v) for v, m in enumerate(self.out_masks))

    def has_arc(self, u: int, v: int) -> bool:
        return (self.out_masks[u] >> v) & 1 == 1

    def out_degree(self, v: int) -> int:
        return self.out_masks[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_masks[v].bit_count()

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.out_masks[u]):
                yield (u, v)

    def arc_count(self) -> int:
        return self.n * (self.n - 1) // 2

    def as_digraph(self) -> "Digraph":
        return Digraph(self.n, frozenset(self.arcs()))

    @staticmethod
    def from_out_masks(n: int, out: list[int] | tuple[int, ...]) -> "Tournament":
        bits = 0
        p = 0
        for i in range(n):
            for j in range(i + 1, n):
                fwd = (out[i] >> j) & 1
                bwd = (out[j] >> i) & 1
                if fwd == bwd:
                    raise ValueError(f"pair ({i},{j}) is not oriented exactly once")
                bits |= fwd << p
                p += 1
        return Tournament(n, bits)

    @staticmethod
    def from_arcs(n: int, arcs) -> "Tournament":
        out = [0] * n
        for u, v in arcs:
            out[u] |= 1 << v
        return Tournament.from_out_masks(n, out)


@dataclass(frozen=True)
class Digraph:
    """Plain digraph: vertex count plus a set of ordered arc pairs."""

    n: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) out of range")

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        out = [0] * self.n
        for u, v in self.arcs:
            out[u] |= 1 << v
        return tuple(out)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        inn = [0] * self.n
        for u, v in self.arcs:
            inn[v] |= 1 << u
        return tuple(inn)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def out_degree(self, v: int) -> int:
        return self.out_masks[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_masks[v].bit_count()

    def arc_count(self) -> int:
        return len(self.arcs)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, frozenset((v, u) for u, v in self.arcs))

    def minus_arcs(self, removed) -> "Digraph":
        return Digraph(self.n, self.arcs - frozenset(removed))

    def is_subgraph_of(self, host) -> bool:
        return all(host.has_arc(u, v) for u, v in self.arcs)

    @staticmethod
    def from_arcs(n: int, arcs) -> "Digraph":
        return Digraph(n, frozenset((int(u), int(v)) for u, v in arcs))

    @staticmethod
    def empty(n: int) -> "Digraph":
        return Digraph(n, frozenset())


@dataclass(frozen=True)
class Ordering:
    """A permutation of the vertices; positions are 1-based like σ(a, b)."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation of 0..n-1")

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {v: p + 1 for p, v in enumerate(self.perm)}

    def __len__(self) -> int:
        return len(self.perm)

    def vertex_at(self, pos: int) -> int:
        """Vertex at 1-based position ``pos``."""
        return self.perm[pos - 1]

    def position(self, v: int) -> int:
        """1-based position of vertex ``v``."""
        return self._pos[v]

    def window(self, a: int, b: int) -> tuple[int, ...]:
        """Vertices at positions a..b inclusive, clamped to [1, n]."""
        a = max(a, 1)
        b = min(b, len(self.perm))
        if a > b:
            return ()
        return self.perm[a - 1 : b]

    def is_forward(self, u: int, v: int) -> bool:
        return self._pos[u] < self._pos[v]


@dataclass(frozen=True)
class Path:
    """A directed path given by its vertex sequence; one vertex is allowed."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("empty path")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path repeats a vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def is_path_in(self, host) -> bool:
        return all(host.has_arc(u, v) for u, v in self.arcs())


def degree_profile(t: Tournament) -> list[tuple[int, int]]:
    """Per-vertex (out-degree, in-degree)."""
    return [(t.out_degree(v), t.in_degree(v)) for v in range(t.n)]


def balanced_vertex(t: Tournament, direction: str = "out") -> int:
    """Smallest-id vertex v with n/4 <= d(v) <= 3n/4 in the given direction.

    Such a vertex always exists for n >= 2; raises otherwise.
    """
    if t.n < 2:
        raise ValueError("need at least two vertices")
    masks = t.out_masks if direction == "out" else t.in_masks
    lo, hi = t.n / 4, 3 * t.n / 4
    for v in range(t.n):
        if lo <= masks[v].bit_count() <= hi:
            return v
    raise AssertionError("no balanced vertex; tournament invariant broken")


def top_degree_set(t: Tournament, direction: str, extreme: str, count: int) -> tuple[int, ...]:
    """The ``count`` vertices of largest/smallest out- or in-degree.

    Ties break toward smaller vertex ids, so the result is deterministic.
    """
    if count > t.n:
        raise ValueError("count exceeds vertex count")
    masks = t.out_masks if direction == "out" else t.in_masks
    sign = 1 if extreme == "smallest" else -1
    order = sorted(range(t.n), key=lambda v: (sign * masks[v].bit_count(), v))
    return tuple(order[:count])


def reverse(t: Tournament) -> Tournament:
    full = (1 << (t.n * (t.n - 1) // 2)) - 1
    return Tournament(t.n, ~t.bits & full)


def induced(t: Tournament, vertices) -> tuple[Tournament, tuple[int, ...]]:
    """Sub-tournament on ``vertices`` plus the local-to-global vertex map."""
    vs = tuple(sorted(set(vertices)))
    if not vs:
        raise ValueError("cannot induce on the empty set")
    m = len(vs)
    if m <= 64:
        out = [0] * m
        for a, u in enumerate(vs):
            row = t.out_masks[u]
            for b, v in enumerate(vs):
                if (row >> v) & 1:
                    out[a] |= 1 << b
        return Tournament.from_out_masks(m, out), vs
    adj = _orientation_matrix(t.n, t.bits)[np.ix_(vs, vs)]
    return Tournament(m, _bits_from_matrix(adj)), vs


def induced_digraph(d, vertices) -> tuple[Digraph, tuple[int, ...]]:
    """Induced sub-digraph plus the local-to-global vertex map."""
    vs = tuple(sorted(set(vertices)))
    idx = {v: a for a, v in enumerate(vs)}
    arcs = set()
    for a, u in enumerate(vs):
        row = d.out_masks[u]
        for v in vs:
            if (row >> v) & 1:
                arcs.add((a, idx[v]))
    return Digraph(len(vs), frozenset(arcs)), vs


def gen_random(n: int, seed: int) -> Tournament:
    """Random tournament: each pair gets an independent fair coin.

    The coin stream comes from ``random.Random(seed)`` via one
    ``getrandbits(1)`` call per pair in row-major pair order, so equal
    seeds reproduce the tournament bit-for-bit.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    bits = 0
    for p in range(n * (n - 1) // 2):
        bits |= rng.getrandbits(1) << p
    return Tournament(n, bits)


def gen_k_connected(n: int, k: int, seed: int, max_tries: int = 64) -> Tournament:
    """Sample random tournaments until one is strongly k-connected."""
    from .flows import is_strongly_k_connected

    if n < k + 1:
        raise ValueError("need n >= k+1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        t = gen_random(n, rng.getrandbits(63))
        if is_strongly_k_connected(t, k):
            return t
    raise NotFound(f"no strongly {k}-connected tournament on {n} vertices after {max_tries} tries")
