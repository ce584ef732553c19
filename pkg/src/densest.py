"""
Exact densest-subgraph machinery for one deterministic world.

Pipeline per world: peel for a lower bound ρ̃, prune to the
(⌈ρ̃⌉)-core, binary-search the optimum with min-cut tests, then read every
densest subgraph off the SCC DAG of the residual graph at the optimum.
"""

import heapq
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx

from .config import get_settings
from .errors import EnumerationCapError
from .graph_core import NodeSet, Pattern, World
from .maxflow import (ComponentDag, FlowNetwork, build_clique_flow_network, build_edge_flow_network,
                      build_pattern_flow_network, max_flow, residual_scc_dag, source_side)
from .motifs import list_h_cliques, list_pattern_instances
from .notions import DensityNotion, InstanceTable, instance_table, table_degrees, table_weight_within

logger = logging.getLogger(__name__)

WorldLike = Union[World, nx.Graph]


def _as_graph(world: WorldLike) -> nx.Graph:
    return world.to_networkx() if isinstance(world, World) else world


@dataclass(frozen=True)
class DensestResult:
    """All densest subgraphs of one world."""

    optimum: Fraction
    all_densest: Tuple[NodeSet, ...]
    maximal: NodeSet
    degenerate: bool = False


@dataclass
class _PeelTrace:
    order: List[int]
    densities: List[Fraction]
    cores: Dict[int, int]

    @property
    def best(self) -> Fraction:
        return max(self.densities, default=Fraction(0))


def _row_index(table: InstanceTable) -> Dict[int, List[int]]:
    rows_of = defaultdict(list)
    for i, (members, _) in enumerate(table):
        for v in members:
            rows_of[v].append(i)
    return rows_of


def _peel(nodes: Iterable[int], table: InstanceTable) -> _PeelTrace:
    """Min-degree peeling; records the density before each removal and the core numbers."""
    nodes = sorted(nodes)
    rows_of = _row_index(table)
    degree = table_degrees(table, nodes)
    alive = [True] * len(table)
    weight = sum(w for _, w in table)
    count = len(nodes)
    heap = [(d, v) for v, d in degree.items()]
    heapq.heapify(heap)
    removed: Set[int] = set()
    trace = _PeelTrace([], [], {})
    k = 0
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != degree[v]:
            continue
        trace.densities.append(Fraction(weight, count))
        k = max(k, d)
        trace.cores[v] = k
        trace.order.append(v)
        removed.add(v)
        for i in rows_of[v]:
            if not alive[i]:
                continue
            alive[i] = False
            members, w = table[i]
            weight -= w
            for u in members:
                if u != v:
                    degree[u] -= w
                    heapq.heappush(heap, (degree[u], u))
        count -= 1
    return trace


def _core_nodes(nodes: Iterable[int], table: InstanceTable, k: int) -> Set[int]:
    """Nodes of the maximal subgraph in which every node has notion-degree >= k."""
    remaining = set(nodes)
    if k <= 0:
        return remaining
    rows_of = _row_index(table)
    degree = table_degrees(table, remaining)
    alive = [True] * len(table)
    queue = [v for v in sorted(remaining) if degree[v] < k]
    while queue:
        v = queue.pop()
        if v not in remaining:
            continue
        remaining.discard(v)
        for i in rows_of[v]:
            if not alive[i]:
                continue
            alive[i] = False
            members, w = table[i]
            for u in members:
                if u != v and u in remaining:
                    degree[u] -= w
                    if degree[u] < k:
                        queue.append(u)
    return remaining


def peel_lower_bound(world: WorldLike, notion: DensityNotion) -> Fraction:
    """
    Density lower bound ρ̃ from min-degree peeling.

    Returns:
        Largest density among the peeling's intermediate subgraphs (0 for an empty world)
    """
    graph = _as_graph(world)
    return _peel(graph.nodes, instance_table(graph, notion)).best


def core_prune(world: WorldLike, notion: DensityNotion, k: int) -> nx.Graph:
    """
    Return the (k)-core of the world under the notion's degree.

    Raises:
        ValueError: If k < 0
    """
    if k < 0:
        raise ValueError(f"core order must be non-negative, got {k}")
    graph = _as_graph(world)
    return graph.subgraph(_core_nodes(graph.nodes, instance_table(graph, notion), k)).copy()


def core_decomposition(world: WorldLike, notion: DensityNotion) -> Dict[int, int]:
    """Core number of every node under the notion's degree."""
    graph = _as_graph(world)
    return _peel(graph.nodes, instance_table(graph, notion)).cores


def simplest_fraction_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the closed interval [lo, hi] (Stern-Brocot descent)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    floor = math.floor(lo)
    if floor == lo:
        return Fraction(floor)
    if floor + 1 <= hi:
        return Fraction(floor + 1)
    return floor + 1 / simplest_fraction_between(1 / (hi - floor), 1 / (lo - floor))


class _FlowProblem:
    """The notion's parametric network family over one (pruned) graph."""

    def __init__(self, graph: nx.Graph, notion: DensityNotion,
                 weights: Optional[Mapping[Tuple[int, ...], int]] = None):
        self.graph = graph
        self.notion = notion
        self.weights = weights
        self.index = None
        if notion.kind == 'clique':
            self.index = list_h_cliques(graph, notion.h)
            rows = [(c, 1) for c in self.index.cliques]
        elif notion.kind == 'pattern':
            self.index = list_pattern_instances(graph, notion.pattern)
            rows = [(tuple(nodes), m) for nodes, m in self.index.groups]
        else:
            rows = [(tuple(sorted(e)), 1) for e in graph.edges()]
        if weights is not None:
            rows = [(nodes, int(weights.get(nodes, 0))) for nodes, _ in rows]
        self.table = [row for row in rows if row[1] > 0]
        self.total = sum(w for _, w in self.table)
        self.flow_calls = 0

    def network(self, alpha: Fraction) -> FlowNetwork:
        if self.notion.kind == 'edge':
            return build_edge_flow_network(self.graph, alpha, self.weights)
        if self.notion.kind == 'clique':
            return build_clique_flow_network(self.graph, self.index, alpha, self.weights)
        return build_pattern_flow_network(self.graph, self.index, alpha, self.weights)

    def denser_than(self, alpha: Fraction) -> Optional[NodeSet]:
        """A node set with density strictly above alpha, or None if none exists."""
        self.flow_calls += 1
        net = self.network(alpha)
        result = max_flow(net)
        if result.value < net.saturation:
            return source_side(net, result.residual)
        return None

    def density(self, nodes: Iterable[int]) -> Fraction:
        nodes = list(nodes)
        return Fraction(table_weight_within(self.table, nodes), len(nodes))


def _search_optimum(problem: _FlowProblem, lower: Fraction) -> Fraction:
    """Binary search between an attained density and the total weight, snapped to the exact optimum."""
    found = problem.denser_than(lower)
    if found is None:
        return Fraction(lower)
    n = problem.graph.number_of_nodes()
    lo = problem.density(found)
    hi = Fraction(problem.total)
    gap = Fraction(1, n * (n - 1))
    while lo < hi and hi - lo >= gap:
        mid = (lo + hi) / 2
        found = problem.denser_than(mid)
        if found is None:
            hi = mid
        else:
            lo = problem.density(found)
    optimum = simplest_fraction_between(lo, hi)
    if problem.denser_than(optimum) is not None:
        raise AssertionError(f"snapped density {optimum} is not optimal")
    return optimum


@dataclass(frozen=True)
class _Solution:
    optimum: Fraction
    dag: ComponentDag
    network: FlowNetwork


def _solve_at_optimum(graph: nx.Graph, notion: DensityNotion,
                      weights: Optional[Mapping[Tuple[int, ...], int]] = None) -> Optional[_Solution]:
    """Optimum, residual SCC DAG and network at the optimum; None for a zero-density world."""
    table = instance_table(graph, notion, weights)
    if not table:
        return None
    lower = _peel(graph.nodes, table).best
    pruned = graph.subgraph(_core_nodes(graph.nodes, table, math.ceil(lower)))
    problem = _FlowProblem(pruned, notion, weights)
    optimum = _search_optimum(problem, lower)
    net = problem.network(optimum)
    dag = residual_scc_dag(net, max_flow(net).residual)
    logger.debug(f"optimum {optimum} on {pruned.number_of_nodes()}-node core "
                 f"after {problem.flow_calls} flow tests")
    return _Solution(optimum, dag, net)


def optimal_density(world: WorldLike, notion: DensityNotion) -> Fraction:
    """
    Exact maximum density ρ* of the world under the notion.

    Returns:
        ρ* as a Fraction whose denominator is at most the pruned node count (0 for empty worlds)
    """
    graph = _as_graph(world)
    table = instance_table(graph, notion)
    if not table:
        return Fraction(0)
    lower = _peel(graph.nodes, table).best
    pruned = graph.subgraph(_core_nodes(graph.nodes, table, math.ceil(lower)))
    return _search_optimum(_FlowProblem(pruned, notion), lower)


def _independent_sets(dag: ComponentDag, limit: int) -> List[NodeSet]:
    """
    Enumerate the vertex sets of all independent component sets.

    A chosen component contributes itself and its descendants; once a
    component has been tried it is dropped from its siblings' pools, so each
    set is produced once. Depth-first preorder, ascending component id.
    """
    eligible = [c for c in dag.non_trivial if dag.vertex_mask[c]]
    closure = {c: NodeSet(dag.vertex_mask[c]).union(*(dag.vertex_mask[d] for d in dag.descendants(c)))
               for c in eligible}
    results: List[NodeSet] = []
    stack: List[Tuple[NodeSet, List[int]]] = [(NodeSet(), eligible)]
    first = True
    while stack:
        members, pool = stack.pop()
        if not first:
            if len(results) >= limit:
                raise EnumerationCapError(f"more than {limit} densest subgraphs", results)
            results.append(members)
        first = False
        children = []
        for i, c in enumerate(pool):
            blocked = dag.descendants(c) | dag.ancestors(c)
            children.append((members.union(closure[c]), [x for x in pool[i + 1:] if x not in blocked]))
        stack.extend(reversed(children))
    if len(set(results)) != len(results):
        raise AssertionError("densest subgraph enumerated twice")
    return results


def enumerate_all_densest(world: WorldLike, notion: DensityNotion,
                          max_densest: Optional[int] = None) -> DensestResult:
    """
    Every densest subgraph of the world.

    Args:
        world: World or deterministic graph
        notion: Density notion
        max_densest: Enumeration cap (defaults to UDENSE_MAX_DENSEST)

    Returns:
        DensestResult; a zero-density world is flagged degenerate and lists its
        singletons only when there are at most ``max_densest`` nodes

    Raises:
        EnumerationCapError: If more than ``max_densest`` sets exist (partial list attached)
    """
    graph = _as_graph(world)
    limit = get_settings().max_densest if max_densest is None else max_densest
    solution = _solve_at_optimum(graph, notion)
    if solution is None:
        nodes = sorted(graph.nodes)
        if len(nodes) > limit:
            return DensestResult(Fraction(0), (), NodeSet(), degenerate=True)
        return DensestResult(Fraction(0), tuple(NodeSet([v]) for v in nodes), NodeSet(nodes), degenerate=True)

    dag = solution.dag
    sets = _independent_sets(dag, limit)
    maximal = NodeSet().union(*(dag.vertex_mask[c] for c in dag.non_trivial))
    return DensestResult(solution.optimum, tuple(sets), maximal)


def maximal_densest_or_none(graph: nx.Graph, notion: DensityNotion) -> Optional[NodeSet]:
    """Union of all densest subgraphs, or None for a zero-density world."""
    solution = _solve_at_optimum(graph, notion)
    if solution is None:
        return None
    dag = solution.dag
    return NodeSet().union(*(dag.vertex_mask[c] for c in dag.non_trivial))


def maximal_densest(world: WorldLike, notion: DensityNotion) -> NodeSet:
    """
    Union of all densest subgraphs, read directly off the residual SCC DAG.

    A zero-density world returns all of its nodes, matching
    DensestResult.maximal for the degenerate case.
    """
    graph = _as_graph(world)
    maximal = maximal_densest_or_none(graph, notion)
    return NodeSet(graph.nodes) if maximal is None else maximal


@dataclass(frozen=True)
class WeightedDensest:
    nodes: NodeSet
    optimum: Fraction
    network: Optional[FlowNetwork]


def weighted_maximal_densest(graph: nx.Graph, notion: DensityNotion,
                             weights: Mapping[Tuple[int, ...], int]) -> WeightedDensest:
    """
    Maximal densest subgraph under integer instance weights.

    Args:
        graph: Deterministic skeleton
        notion: Density notion
        weights: Integer weight per edge pair, clique tuple or instance-group node tuple

    Returns:
        WeightedDensest with the maximal set, the optimum in weight units and the
        network at the optimum (empty set and no network when all weights vanish)
    """
    solution = _solve_at_optimum(graph, notion, weights)
    if solution is None:
        return WeightedDensest(NodeSet(), Fraction(0), None)
    dag = solution.dag
    nodes = NodeSet().union(*(dag.vertex_mask[c] for c in dag.non_trivial))
    return WeightedDensest(nodes, solution.optimum, solution.network)


def heuristic_pattern_dense(world: WorldLike, pattern: Pattern) -> List[NodeSet]:
    """
    Dense subgraphs from (k, ψ)-core peeling, without max-flow.

    Returns:
        The (k_max, ψ)-core followed by every peeling intermediate that is denser
        than it; empty when the world has no ψ-instance
    """
    graph = _as_graph(world)
    table = instance_table(graph, DensityNotion.of_pattern(pattern))
    if not table:
        return []
    trace = _peel(graph.nodes, table)
    k_max = max(trace.cores.values())
    start = next(i for i, v in enumerate(trace.order) if trace.cores[v] == k_max)
    core_density = trace.densities[start]
    found = [NodeSet(trace.order[start:])]
    for i, density in enumerate(trace.densities):
        if density > core_density:
            candidate = NodeSet(trace.order[i:])
            if candidate not in found:
                found.append(candidate)
    return found
