"""
Density notions and their instance tables.

Every densest-subgraph routine works on an "instance table": a list of
(node tuple, integer weight) rows, one per edge, h-clique or ψ-instance
group. Unweighted notions use the instance multiplicity as the weight.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .graph_core import Pattern, load_pattern
from .motifs import list_h_cliques, list_pattern_instances

InstanceTable = List[Tuple[Tuple[int, ...], int]]


@dataclass(frozen=True)
class DensityNotion:
    """Edge density, h-clique density or pattern density."""

    kind: str
    h: int = 2
    pattern: Optional[Pattern] = None

    def __post_init__(self):
        if self.kind not in ('edge', 'clique', 'pattern'):
            raise ValueError(f"Unknown density notion {self.kind!r}")
        if self.kind == 'clique' and self.h < 2:
            raise ValueError(f"clique density needs h >= 2, got {self.h}")
        if self.kind == 'pattern' and self.pattern is None:
            raise ValueError("pattern density needs a pattern")

    @classmethod
    def edge(cls) -> 'DensityNotion':
        return cls('edge')

    @classmethod
    def clique(cls, h: int) -> 'DensityNotion':
        return cls('clique', h=h)

    @classmethod
    def of_pattern(cls, pattern: Pattern) -> 'DensityNotion':
        return cls('pattern', h=pattern.node_count, pattern=pattern)

    @property
    def arity(self) -> int:
        """Nodes per instance: 2, h or |V_psi|."""
        if self.kind == 'edge':
            return 2
        if self.kind == 'clique':
            return self.h
        return self.pattern.node_count

    @property
    def label(self) -> str:
        if self.kind == 'edge':
            return 'edge'
        if self.kind == 'clique':
            return f"clique:{self.h}"
        return f"pattern:{self.pattern.name}"


def instance_table(graph: nx.Graph, notion: DensityNotion,
                   weights: Optional[Mapping[Tuple[int, ...], int]] = None) -> InstanceTable:
    """
    List the notion's instances in ``graph`` as (nodes, weight) rows.

    Args:
        graph: Deterministic graph
        notion: Density notion
        weights: Optional integer weight per row key (edge pair, clique tuple or
            instance-group node tuple); missing keys weigh 0

    Returns:
        Rows sorted by node tuple; zero-weight rows are dropped
    """
    if notion.kind == 'edge':
        rows = [(tuple(sorted(edge)), 1) for edge in graph.edges()]
    elif notion.kind == 'clique':
        rows = [(clique, 1) for clique in list_h_cliques(graph, notion.h).cliques]
    else:
        index = list_pattern_instances(graph, notion.pattern)
        rows = [(tuple(nodes), multiplicity) for nodes, multiplicity in index.groups]
    if weights is not None:
        rows = [(nodes, int(weights.get(nodes, 0))) for nodes, _ in rows]
    return sorted(row for row in rows if row[1] > 0)


def count_instances(graph: nx.Graph, notion: DensityNotion) -> int:
    """Number of edges, h-cliques or ψ-instances in ``graph``."""
    if notion.kind == 'edge':
        return graph.number_of_edges()
    return sum(weight for _, weight in instance_table(graph, notion))


def table_degrees(table: InstanceTable, nodes: Sequence[int]) -> Dict[int, int]:
    """Weighted notion degree of every node (0 for nodes in no instance)."""
    degrees = {v: 0 for v in nodes}
    for members, weight in table:
        for v in members:
            degrees[v] = degrees.get(v, 0) + weight
    return degrees


def table_weight_within(table: InstanceTable, nodes) -> int:
    """Total weight of the rows whose nodes all lie in ``nodes``."""
    inside = set(nodes)
    return sum(weight for members, weight in table if inside.issuperset(members))


def parse_density(spec: str) -> DensityNotion:
    """
    Parse a density specifier: ``edge``, ``clique:<h>`` or ``pattern:<file|builtin>``.

    Raises:
        ValueError: On malformed specifiers
    """
    kind, _, argument = spec.partition(':')
    if kind == 'edge' and not argument:
        return DensityNotion.edge()
    if kind == 'clique':
        try:
            return DensityNotion.clique(int(argument))
        except ValueError:
            raise ValueError(f"Invalid clique specifier {spec!r}; expected clique:<h> with h >= 2")
    if kind == 'pattern' and argument:
        return DensityNotion.of_pattern(load_pattern(argument))
    raise ValueError(f"Invalid density specifier {spec!r}; expected edge, clique:<h> or pattern:<file>")
