"""Logarithmic transitive chains that dominate the rest of a tournament.

Starting from a vertex v, repeatedly pick a degree-balanced vertex inside
the current out-neighbourhood level; the picked vertices form a transitive
chain A with |A| = Theta(log d) such that every vertex outside A has an
arc into A.  Reversing all arcs gives the out-dominating mirror.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Tournament, iter_bits, reverse


@dataclass(frozen=True)
class DominatingChain:
    """Transitive chain in its host tournament.

    ``vertices`` is the transitive order (source first, sink last).  For
    an in-dominating chain the source is the defining vertex; for an
    out-dominating chain the sink is.  ``levels`` holds |L_1| .. |L_s| in
    construction order, i.e. counted from the defining vertex outward,
    and always ends with 0.
    """

    vertices: tuple[int, ...]
    kind: str  # "in" | "out"
    d: int
    levels: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def sink(self) -> int:
        return self.vertices[-1]


def _balanced_in_level(t: Tournament, level: int) -> int:
    """Smallest-id u in the level with level/4 <= out-degree <= 3*level/4
    inside the level."""
    m = level.bit_count()
    lo, hi = m / 4, 3 * m / 4
    for u in iter_bits(level):
        if lo <= (t.out_masks[u] & level).bit_count() <= hi:
            return u
    raise AssertionError("no balanced vertex inside level")


def in_dominating_chain(t: Tournament, v: int) -> DominatingChain:
    """Chain starting at v whose members absorb an arc from every outsider."""
    d = t.out_degree(v)
    if d == 0:
        return DominatingChain((v,), "in", 0, (0,))
    vertices = [v]
    level = t.out_masks[v]
    levels = [level.bit_count()]
    while level:
        if level.bit_count() == 1:
            u = level.bit_length() - 1
        else:
            u = _balanced_in_level(t, level)
        vertices.append(u)
        level &= t.out_masks[u]
        levels.append(level.bit_count())
    return DominatingChain(tuple(vertices), "in", d, tuple(levels))


def out_dominating_chain(t: Tournament, v: int) -> DominatingChain:
    """Mirror construction: chain ending at v that dominates every outsider."""
    mirrored = in_dominating_chain(reverse(t), v)
    return DominatingChain(
        tuple(reversed(mirrored.vertices)), "out", mirrored.d, mirrored.levels
    )


def chain_windows(chain: DominatingChain, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(tail window, head window) of an out-dominating chain.

    The tail window holds the last max(ceil(s/5 - 13), 0) vertices of the
    transitive order, whose in/out-neighbourhoods outside the chain stay
    large; the head window holds the first min(ceil(5*log2(k) + 30), s)
    vertices, the only ones exempt from the 1000*k^2 degree floor.
    """
    if chain.kind != "out":
        raise ValueError("windows are defined for out-dominating chains")
    if k < 1:
        raise ValueError("k must be >= 1")
    s = chain.size
    tail_len = max(-((65 - s) // 5), 0)  # ceil((s - 65) / 5), integer-exact
    head_len = min(math.ceil(5 * math.log2(k) + 30), s)
    tail = chain.vertices[s - tail_len :] if tail_len else ()
    head = chain.vertices[:head_len]
    return tuple(tail), tuple(head)
