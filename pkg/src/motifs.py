"""
Clique and pattern-instance listing.

h-cliques are listed by recursive extension along a degeneracy ordering;
pattern instances come from VF2 subgraph monomorphisms, deduplicated by
edge subset and grouped by node set.
"""

import heapq
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from .config import get_settings
from .errors import PatternTooLargeError
from .graph_core import NodeSet, Pattern

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliqueIndex:
    """All h-cliques of a graph with their (h-1)-clique completion lists."""

    h: int
    cliques: Tuple[Tuple[int, ...], ...]
    lambda_set: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    degrees: Dict[int, int]

    @property
    def count(self) -> int:
        return len(self.cliques)


@dataclass(frozen=True)
class InstanceIndex:
    """ψ-instances of a graph grouped by node set."""

    pattern: Pattern
    groups: Tuple[Tuple[NodeSet, int], ...]
    degrees: Dict[int, int]
    total: int
    instances: Tuple[Tuple[NodeSet, Tuple[Tuple[int, int], ...]], ...]


def degeneracy_order(graph: nx.Graph) -> List[int]:
    """Nodes in smallest-last order (repeatedly remove a minimum-degree node, ties by id)."""
    degree = {v: graph.degree(v) for v in graph.nodes}
    heap = [(d, v) for v, d in degree.items()]
    heapq.heapify(heap)
    removed = set()
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != degree[v]:
            continue
        removed.add(v)
        order.append(v)
        for w in graph.neighbors(v):
            if w not in removed:
                degree[w] -= 1
                heapq.heappush(heap, (degree[w], w))
    return order


def list_h_cliques(graph: nx.Graph, h: int) -> CliqueIndex:
    """
    List every h-clique of ``graph`` exactly once.

    Args:
        graph: Deterministic graph
        h: Clique size, at least 2

    Returns:
        CliqueIndex with canonically sorted cliques, completion lists and degrees

    Raises:
        ValueError: If h < 2
    """
    if h < 2:
        raise ValueError(f"clique size h must be at least 2, got {h}")

    rank = {v: i for i, v in enumerate(degeneracy_order(graph))}
    later = {v: {w for w in graph.neighbors(v) if rank[w] > rank[v]} for v in graph.nodes}
    found: List[Tuple[int, ...]] = []

    def extend(members: List[int], candidates: set):
        if len(members) == h:
            found.append(tuple(sorted(members)))
            return
        need = h - len(members)
        if len(candidates) < need:
            return
        for w in sorted(candidates, key=rank.get):
            extend(members + [w], candidates & later[w])

    for v in sorted(graph.nodes, key=rank.get):
        extend([v], later[v])

    cliques = tuple(sorted(found))
    completions: Dict[Tuple[int, ...], set] = defaultdict(set)
    degrees = {v: 0 for v in graph.nodes}
    for clique in cliques:
        for i, v in enumerate(clique):
            degrees[v] += 1
            completions[clique[:i] + clique[i + 1:]].add(v)
    lambda_set = tuple((lam, tuple(sorted(vs))) for lam, vs in sorted(completions.items()))
    return CliqueIndex(h, cliques, lambda_set, degrees)


def list_pattern_instances(graph: nx.Graph, pattern: Pattern,
                           node_cap: Optional[int] = None) -> InstanceIndex:
    """
    List the non-induced ψ-instances of ``graph``.

    Each distinct edge subset isomorphic to ψ is one instance; the raw
    monomorphism count is exactly automorphism_count times the number of
    instances.

    Args:
        graph: Deterministic graph
        pattern: Connected pattern ψ
        node_cap: Largest |V_psi| accepted (defaults to UDENSE_PATTERN_NODE_CAP)

    Returns:
        InstanceIndex grouped by node set

    Raises:
        PatternTooLargeError: If the pattern exceeds the cap
    """
    node_cap = get_settings().pattern_node_cap if node_cap is None else node_cap
    if pattern.node_count > node_cap:
        raise PatternTooLargeError(
            f"pattern {pattern.name!r} has {pattern.node_count} nodes, cap is {node_cap}")

    matcher = nx.algorithms.isomorphism.GraphMatcher(graph, pattern.to_networkx())
    embeddings: Counter = Counter()
    for mapping in matcher.subgraph_monomorphisms_iter():
        image = {b: a for a, b in mapping.items()}
        edge_set: FrozenSet[Tuple[int, int]] = frozenset(
            (min(image[a], image[b]), max(image[a], image[b])) for a, b in pattern.edges)
        embeddings[edge_set] += 1

    raw_total = sum(embeddings.values())
    if raw_total != pattern.automorphism_count * len(embeddings):
        raise AssertionError(
            f"monomorphism count {raw_total} is not {pattern.automorphism_count} x {len(embeddings)}")

    instances = sorted(
        (NodeSet(v for edge in edge_set for v in edge), tuple(sorted(edge_set)))
        for edge_set in embeddings)
    group_sizes: Counter = Counter(nodes for nodes, _ in instances)
    degrees = {v: 0 for v in graph.nodes}
    for nodes, _ in instances:
        for v in nodes:
            degrees[v] += 1
    groups = tuple(sorted(group_sizes.items()))
    logger.debug(f"{len(instances)} instances of {pattern.name} in {len(groups)} groups")
    return InstanceIndex(pattern, groups, degrees, len(instances), tuple(instances))
