"""
Parametric flow networks for densest-subgraph tests.

Networks carry integer capacities only: a rational guess alpha = a/b is
handled by multiplying every capacity by b. Max-flow is networkx's
highest-label preflow-push; the residual graph is condensed into its SCC
DAG for enumerating every minimum cut.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx
from networkx.algorithms.flow import preflow_push

from .errors import FlowOverflowError
from .graph_core import NodeSet
from .motifs import CliqueIndex, InstanceIndex

logger = logging.getLogger(__name__)

SOURCE = 0
SINK = 1
_INT64_MAX = (1 << 63) - 1

Arc = Tuple[int, int]


@dataclass
class FlowNetwork:
    """
    Directed network with paired arcs.

    Node 0 is the source and node 1 the sink; graph vertices and auxiliary
    (λ / instance-group) nodes follow.
    """

    node_count: int = 2
    source: int = SOURCE
    sink: int = SINK
    scale: int = 1
    capacity: Dict[Arc, int] = field(default_factory=dict)
    vertex_of: Dict[int, int] = field(default_factory=dict)
    aux_members: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    _infinite: List[Arc] = field(default_factory=list, repr=False)

    def add_node(self) -> int:
        self.node_count += 1
        return self.node_count - 1

    def add_arc(self, u: int, v: int, cap: int):
        """Add ``cap`` to arc u->v and make sure the reverse arc exists."""
        if cap < 0:
            raise ValueError(f"negative capacity {cap} on arc ({u}, {v})")
        self.capacity[(u, v)] = self.capacity.get((u, v), 0) + int(cap)
        self.capacity.setdefault((v, u), 0)

    def add_infinite_arc(self, u: int, v: int):
        self.capacity.setdefault((u, v), 0)
        self.capacity.setdefault((v, u), 0)
        self._infinite.append((u, v))

    def close(self) -> 'FlowNetwork':
        """Replace infinite arcs by (sum of finite capacities + 1) and check the 64-bit range."""
        if self._infinite:
            sentinel = sum(self.capacity.values()) + 1
            for arc in self._infinite:
                self.capacity[arc] = sentinel
            self._infinite.clear()
        total = sum(self.capacity.values())
        if total > _INT64_MAX:
            raise FlowOverflowError(f"total scaled capacity {total} exceeds the signed 64-bit range")
        return self

    @property
    def saturation(self) -> int:
        """Total capacity leaving the source (the cut {s})."""
        return sum(cap for (u, _), cap in self.capacity.items() if u == self.source)

    def to_digraph(self) -> nx.DiGraph:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(self.node_count))
        digraph.add_edges_from((u, v, {'capacity': cap}) for (u, v), cap in self.capacity.items())
        return digraph

    def to_dimacs(self) -> str:
        """DIMACS max-flow text (1-based node ids, zero-capacity reverse arcs omitted)."""
        arcs = sorted((u, v, cap) for (u, v), cap in self.capacity.items() if cap > 0)
        lines = [f"c scale {self.scale}",
                 f"p max {self.node_count} {len(arcs)}",
                 f"n {self.source + 1} s",
                 f"n {self.sink + 1} t"]
        lines.extend(f"a {u + 1} {v + 1} {cap}" for u, v, cap in arcs)
        return '\n'.join(lines) + '\n'


def write_dimacs(net: FlowNetwork, path: Union[str, Path]):
    Path(path).write_text(net.to_dimacs(), encoding='utf-8')
    logger.info(f"Wrote DIMACS network ({net.node_count} nodes) to {path}")


@dataclass(frozen=True)
class FlowResult:
    value: int
    residual: Dict[Arc, int]


def max_flow(net: FlowNetwork) -> FlowResult:
    """
    Maximum s-t flow with exact integer arithmetic.

    Returns:
        FlowResult holding the flow value and the remaining capacity of every arc
        (both directions of every pair)
    """
    digraph = net.to_digraph()
    residual_graph = preflow_push(digraph, net.source, net.sink, capacity='capacity')
    residual = {}
    for u, v in net.capacity:
        data = residual_graph[u][v] if residual_graph.has_edge(u, v) else None
        if data is None:
            residual[(u, v)] = net.capacity[(u, v)]
        else:
            residual[(u, v)] = data['capacity'] - data['flow']
    return FlowResult(int(residual_graph.graph['flow_value']), residual)


def check_conservation(net: FlowNetwork, residual: Mapping[Arc, int]) -> bool:
    """True iff the flow implied by ``residual`` is antisymmetric and conserved at non-terminals."""
    balance: Dict[int, int] = defaultdict(int)
    for (u, v), cap in net.capacity.items():
        flow = cap - residual[(u, v)]
        if flow != -(net.capacity[(v, u)] - residual[(v, u)]):
            return False
        balance[u] -= flow
    return all(b == 0 for node, b in balance.items() if node not in (net.source, net.sink))


def _add_vertices(net: FlowNetwork, nodes: Iterable[int]) -> Dict[int, int]:
    index = {}
    for v in sorted(nodes):
        flow_node = net.add_node()
        net.vertex_of[flow_node] = v
        index[v] = flow_node
    return index


def build_edge_flow_network(graph: nx.Graph, alpha: Fraction,
                            weights: Optional[Mapping[Tuple[int, int], int]] = None) -> FlowNetwork:
    """
    Goldberg network for edge density at guess ``alpha``.

    s->v carries deg(v)*b, v->t carries 2a, each edge both ways carries b
    (edge weights multiply the degree and edge terms when given).
    """
    alpha = Fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    net = FlowNetwork(scale=b)
    index = _add_vertices(net, graph.nodes)
    degree = defaultdict(int)
    for u, v in graph.edges():
        w = 1 if weights is None else int(weights.get((min(u, v), max(u, v)), 0))
        if w <= 0:
            continue
        degree[u] += w
        degree[v] += w
        net.add_arc(index[u], index[v], w * b)
        net.add_arc(index[v], index[u], w * b)
    for v, node in index.items():
        net.add_arc(SOURCE, node, degree[v] * b)
        net.add_arc(node, SINK, 2 * a)
    return net.close()


def build_clique_flow_network(graph: nx.Graph, index: CliqueIndex, alpha: Fraction,
                              weights: Optional[Mapping[Tuple[int, ...], int]] = None) -> FlowNetwork:
    """
    Network for h-clique density at guess ``alpha``.

    One auxiliary node per (h-1)-clique λ that lies in some h-clique:
    λ->v is infinite for v in λ, v->λ carries b per h-clique λ∪{v}.
    """
    alpha = Fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    h = index.h
    net = FlowNetwork(scale=b)
    vertex = _add_vertices(net, graph.nodes)

    weight = {clique: 1 if weights is None else int(weights.get(clique, 0)) for clique in index.cliques}
    degree = defaultdict(int)
    for clique, w in weight.items():
        for v in clique:
            degree[v] += w

    for lam, completions in index.lambda_set:
        arcs = [(v, weight[tuple(sorted(lam + (v,)))]) for v in completions]
        arcs = [(v, w) for v, w in arcs if w > 0]
        if not arcs:
            continue
        lam_node = net.add_node()
        net.aux_members[lam_node] = lam
        for u in lam:
            net.add_infinite_arc(lam_node, vertex[u])
        for v, w in arcs:
            net.add_arc(vertex[v], lam_node, w * b)

    for v, node in vertex.items():
        net.add_arc(SOURCE, node, degree[v] * b)
        net.add_arc(node, SINK, h * a)
    return net.close()


def build_pattern_flow_network(graph: nx.Graph, index: InstanceIndex, alpha: Fraction,
                               weights: Optional[Mapping[Tuple[int, ...], int]] = None) -> FlowNetwork:
    """
    Network for pattern density at guess ``alpha``.

    One auxiliary node per instance group g (instances sharing a node set):
    g->v carries |g|(|V_psi|-1)b and v->g carries |g|b for every v in g.
    With ``weights`` the group weight replaces |g|.
    """
    alpha = Fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    k = index.pattern.node_count
    net = FlowNetwork(scale=b)
    vertex = _add_vertices(net, graph.nodes)

    degree = defaultdict(int)
    for nodes, multiplicity in index.groups:
        w = multiplicity if weights is None else int(weights.get(tuple(nodes), 0))
        if w <= 0:
            continue
        group_node = net.add_node()
        net.aux_members[group_node] = tuple(nodes)
        for v in nodes:
            degree[v] += w
            net.add_arc(group_node, vertex[v], w * (k - 1) * b)
            net.add_arc(vertex[v], group_node, w * b)

    for v, node in vertex.items():
        net.add_arc(SOURCE, node, degree[v] * b)
        net.add_arc(node, SINK, k * a)
    return net.close()


def source_side(net: FlowNetwork, residual: Mapping[Arc, int]) -> NodeSet:
    """Graph vertices reachable from s through arcs with positive residual capacity."""
    adjacency: Dict[int, List[int]] = defaultdict(list)
    for (u, v), cap in residual.items():
        if cap > 0:
            adjacency[u].append(v)
    seen = {net.source}
    stack = [net.source]
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return NodeSet(net.vertex_of[x] for x in seen if x in net.vertex_of)


@dataclass
class ComponentDag:
    """SCC condensation of a residual graph, components numbered by smallest member."""

    component_of: Dict[int, int]
    components: List[List[int]]
    dag_edges: Dict[int, List[int]]
    scc_of_source: int
    scc_of_sink: int
    vertex_mask: List[NodeSet]

    def __post_init__(self):
        self._dag = nx.DiGraph()
        self._dag.add_nodes_from(range(len(self.components)))
        self._dag.add_edges_from((c, d) for c, targets in self.dag_edges.items() for d in targets)
        self._descendants: Dict[int, Set[int]] = {}
        self._ancestors: Dict[int, Set[int]] = {}

    @property
    def non_trivial(self) -> List[int]:
        """Component ids other than those of s and t, ascending."""
        return [c for c in range(len(self.components)) if c not in (self.scc_of_source, self.scc_of_sink)]

    def descendants(self, c: int) -> Set[int]:
        """Non-trivial components reachable from ``c`` (excluding ``c``)."""
        if c not in self._descendants:
            self._descendants[c] = nx.descendants(self._dag, c) - {self.scc_of_source, self.scc_of_sink}
        return self._descendants[c]

    def ancestors(self, c: int) -> Set[int]:
        if c not in self._ancestors:
            self._ancestors[c] = nx.ancestors(self._dag, c) - {self.scc_of_source, self.scc_of_sink}
        return self._ancestors[c]

    def check_invariants(self):
        """Assert the structure a residual graph has at the optimal density (every vertex of positive degree)."""
        if not nx.is_directed_acyclic_graph(self._dag):
            raise AssertionError("component graph is not acyclic")
        if len(self.components[self.scc_of_source]) != 1 or self.dag_edges.get(self.scc_of_source):
            raise AssertionError("scc(s) must be a singleton without outgoing edges")
        if any(self.scc_of_sink in targets for targets in self.dag_edges.values()):
            raise AssertionError("scc(t) must have no incoming edges")
        unreached = set(range(len(self.components))) - nx.descendants(self._dag, self.scc_of_sink)
        if unreached - {self.scc_of_sink}:
            raise AssertionError(f"components {sorted(unreached - {self.scc_of_sink})} are unreachable from t")


def residual_scc_dag(net: FlowNetwork, residual: Mapping[Arc, int]) -> ComponentDag:
    """
    Condense the residual graph of a maximum flow into its SCC DAG.

    Arcs with zero residual capacity are dropped; DAG edges are deduplicated.
    """
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(net.node_count))
    digraph.add_edges_from(arc for arc, cap in residual.items() if cap > 0)
    condensed = nx.condensation(digraph)

    raw_members = {c: sorted(condensed.nodes[c]['members']) for c in condensed.nodes}
    renumber = {c: i for i, c in enumerate(sorted(raw_members, key=lambda c: raw_members[c][0]))}
    components: List[List[int]] = [[] for _ in renumber]
    for c, members in raw_members.items():
        components[renumber[c]] = members
    component_of = {node: renumber[c] for node, c in condensed.graph['mapping'].items()}
    dag_edges = {i: [] for i in range(len(components))}
    for c, d in condensed.edges():
        dag_edges[renumber[c]].append(renumber[d])
    for targets in dag_edges.values():
        targets.sort()
    vertex_mask = [NodeSet(net.vertex_of[x] for x in members if x in net.vertex_of) for members in components]
    return ComponentDag(component_of, components, dag_edges,
                        component_of[net.source], component_of[net.sink], vertex_mask)
