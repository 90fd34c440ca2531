"""JSON and DOT serialization for tournaments and digraphs.

Tournament JSON: ``{"n": <int>, "bits": "<hex>"}`` where the hex string
packs the upper-triangle orientation bits (pair (i, j), i < j, row-major;
bit 1 means i -> j).  Pair p lives in byte p // 8 at bit 7 - p % 8, so the
encoding is byte-for-byte reproducible.

Digraph JSON: ``{"n": <int>, "arcs": [[u, v], ...]}`` with arcs sorted.
"""

from __future__ import annotations

import json

from .core import Digraph, Tournament


def _bits_to_hex(bits: int, nbits: int) -> str:
    nbytes = (nbits + 7) // 8
    out = bytearray(nbytes)
    for p in range(nbits):
        if (bits >> p) & 1:
            out[p // 8] |= 1 << (7 - p % 8)
    return out.hex()


def _hex_to_bits(hexstr: str, nbits: int) -> int:
    raw = bytes.fromhex(hexstr)
    bits = 0
    for p in range(nbits):
        if p // 8 < len(raw) and (raw[p // 8] >> (7 - p % 8)) & 1:
            bits |= 1 << p
    return bits


def tournament_to_dict(t: Tournament) -> dict:
    return {"n": t.n, "bits": _bits_to_hex(t.bits, t.n * (t.n - 1) // 2)}


def tournament_from_dict(d: dict) -> Tournament:
    n = int(d["n"])
    return Tournament(n, _hex_to_bits(d["bits"], n * (n - 1) // 2))


def digraph_to_dict(d: Digraph) -> dict:
    return {"n": d.n, "arcs": [list(a) for a in sorted(d.arcs)]}


def digraph_from_dict(d: dict) -> Digraph:
    return Digraph.from_arcs(int(d["n"]), d["arcs"])


def dumps(obj) -> str:
    if isinstance(obj, Tournament):
        payload = tournament_to_dict(obj)
    elif isinstance(obj, Digraph):
        payload = digraph_to_dict(obj)
    else:
        payload = obj
    return json.dumps(payload, indent=None, separators=(",", ":"), sort_keys=True) + "\n"


def loads(text: str):
    d = json.loads(text)
    if "bits" in d:
        return tournament_from_dict(d)
    if "arcs" in d:
        return digraph_from_dict(d)
    raise ValueError("unrecognized graph JSON: expected 'bits' or 'arcs' key")


def load_path(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save_path(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def good_digraph_to_dict(gd) -> dict:
    """Digraph JSON plus the ordering array and the (k, s) parameters."""
    out = digraph_to_dict(gd.digraph)
    out["ordering"] = list(gd.sigma.perm)
    out["k"] = gd.k
    out["s"] = gd.s
    return out


def to_dot(g, name: str = "G") -> str:
    """DOT export; works for Tournament and Digraph alike."""
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        lines.append(f"  {v};")
    arcs = g.arcs() if isinstance(g, Tournament) else sorted(g.arcs)
    for u, v in arcs:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
