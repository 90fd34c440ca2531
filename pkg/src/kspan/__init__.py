"""Sparse strongly k-connected spanning subgraphs of tournaments.

Given a strongly k-connected tournament on n vertices, ``sparsify``
produces a spanning subgraph that is still strongly k-connected and has
at most k*n + 750*k^2*log2(k+1) arcs, certified by an independent
flow-based verifier.
"""

from .core import (
    Digraph,
    Ordering,
    Path,
    Tournament,
    balanced_vertex,
    degree_profile,
    gen_k_connected,
    gen_random,
    induced,
    induced_digraph,
    reverse,
    top_degree_set,
)
from .flows import (
    Fan,
    PathSystem,
    check_backwards_transitive,
    is_strongly_connected,
    is_strongly_k_connected,
    k_fan,
    min_disjoint_paths,
    validate_fan,
    validate_path_system,
)
from .chains import DominatingChain, chain_windows, in_dominating_chain, out_dominating_chain
from .orderings import GoodDigraph, QOrdering, extract_matchings, good_subgraph, q_ordering, tail_path
from .small import LinkagePair, hamilton_cycle, linkage_pair, sparsify_small, validate_linkage_pair
from .pipeline import SparsifyReport, SparsifyResult, arc_bound, sparsify

__version__ = "0.1.0"

__all__ = [
    "Digraph",
    "DominatingChain",
    "Fan",
    "GoodDigraph",
    "LinkagePair",
    "Ordering",
    "Path",
    "PathSystem",
    "QOrdering",
    "SparsifyReport",
    "SparsifyResult",
    "Tournament",
    "arc_bound",
    "balanced_vertex",
    "chain_windows",
    "check_backwards_transitive",
    "degree_profile",
    "extract_matchings",
    "gen_k_connected",
    "gen_random",
    "good_subgraph",
    "hamilton_cycle",
    "in_dominating_chain",
    "induced",
    "induced_digraph",
    "is_strongly_connected",
    "is_strongly_k_connected",
    "k_fan",
    "linkage_pair",
    "min_disjoint_paths",
    "out_dominating_chain",
    "q_ordering",
    "reverse",
    "sparsify",
    "sparsify_small",
    "tail_path",
    "top_degree_set",
    "validate_fan",
    "validate_linkage_pair",
    "validate_path_system",
]
