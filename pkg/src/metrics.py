"""
Baselines and evaluation metrics.

Expected (pattern) density and the expected densest subgraph, the
deterministic densest subgraph of the skeleton, probabilistic density,
probabilistic clustering coefficient, purity and rank-averaged F1.
"""

import itertools
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .config import get_settings
from .densest import maximal_densest, weighted_maximal_densest
from .errors import GraphFormatError
from .graph_core import NodeSet, UncertainGraph
from .maxflow import write_dimacs
from .motifs import list_h_cliques, list_pattern_instances
from .notions import DensityNotion

logger = logging.getLogger(__name__)


def _instance_probabilities(graph: UncertainGraph, nodes: Optional[Iterable[int]],
                            notion: DensityNotion) -> Dict[Tuple[int, ...], float]:
    """Existence probability of every instance, summed per instance-table key."""
    skeleton = graph.skeleton()
    if nodes is not None:
        skeleton = skeleton.subgraph(NodeSet(nodes))
    weights: Dict[Tuple[int, ...], float] = {}
    if notion.kind == 'edge':
        for u, v, data in skeleton.edges(data=True):
            weights[(min(u, v), max(u, v))] = data['p']
    elif notion.kind == 'clique':
        for clique in list_h_cliques(skeleton, notion.h).cliques:
            weights[clique] = math.prod(graph.probability(u, v) for u, v in itertools.combinations(clique, 2))
    else:
        for group, edges in list_pattern_instances(skeleton, notion.pattern).instances:
            key = tuple(group)
            weights[key] = weights.get(key, 0.0) + math.prod(graph.probability(u, v) for u, v in edges)
    return weights


def expected_density(graph: UncertainGraph, nodes: Iterable[int], notion: DensityNotion) -> float:
    """
    Expected number of notion instances inside ``nodes`` divided by |nodes|.

    Raises:
        ValueError: If the node set is empty
    """
    nodes = NodeSet(nodes)
    if not nodes:
        raise ValueError("expected_density needs a non-empty node set")
    return sum(_instance_probabilities(graph, nodes, notion).values()) / len(nodes)


def expected_densest_subgraph(graph: UncertainGraph, notion: DensityNotion,
                              quantum: Optional[int] = None,
                              dimacs_path: Optional[Union[str, Path]] = None) -> Tuple[NodeSet, float]:
    """
    Node set maximizing expected density.

    Instance probabilities are quantized to integers (multiples of 1/quantum)
    and fed to the weighted densest-subgraph search.

    Args:
        graph: Uncertain graph
        notion: Density notion
        quantum: Weight scale (defaults to UDENSE_WEIGHT_QUANTUM)
        dimacs_path: Optional file receiving the network at the optimum

    Returns:
        (maximal expected-densest node set, its expected density)
    """
    quantum = get_settings().weight_quantum if quantum is None else quantum
    weights = {key: int(round(p * quantum)) for key, p in _instance_probabilities(graph, None, notion).items()}
    result = weighted_maximal_densest(graph.skeleton(), notion, weights)
    if dimacs_path is not None and result.network is not None:
        write_dimacs(result.network, dimacs_path)
    if not result.nodes:
        logger.warning("no instance survives weight quantization; expected densest subgraph is empty")
        return NodeSet(), 0.0
    return result.nodes, expected_density(graph, result.nodes, notion)


def deterministic_densest_subgraph(graph: UncertainGraph, notion: DensityNotion) -> NodeSet:
    """Maximal densest subgraph of the skeleton with every edge present."""
    return maximal_densest(graph.skeleton(), notion)


def probabilistic_density(graph: UncertainGraph, nodes: Iterable[int]) -> float:
    """
    2·Σ p(e) over edges inside ``nodes`` divided by |U|(|U|-1).

    Raises:
        ValueError: If fewer than two nodes are given
    """
    nodes = NodeSet(nodes)
    if len(nodes) < 2:
        raise ValueError("probabilistic_density needs at least two nodes")
    total = sum(graph.probability(u, v) for u, v in itertools.combinations(nodes, 2))
    return 2 * total / (len(nodes) * (len(nodes) - 1))


def probabilistic_clustering_coefficient(graph: UncertainGraph, nodes: Iterable[int]) -> float:
    """Three times the expected triangles over the expected wedges inside ``nodes`` (0 without wedges)."""
    nodes = NodeSet(nodes)
    sub = graph.skeleton().subgraph(nodes)
    wedges = 0.0
    for center in sub.nodes:
        arms = [graph.probability(center, v) for v in sub.neighbors(center)]
        wedges += sum(p * q for p, q in itertools.combinations(arms, 2))
    if wedges == 0:
        return 0.0
    triangles = sum(graph.probability(a, b) * graph.probability(a, c) * graph.probability(b, c)
                    for a, b, c in list_h_cliques(sub, 3).cliques)
    return 3 * triangles / wedges


def purity(nodes: Iterable[int], labels: Mapping[int, str]) -> float:
    """
    Largest fraction of ``nodes`` sharing one community label.

    Raises:
        ValueError: If the set is empty or a node has no label
    """
    nodes = NodeSet(nodes)
    if not nodes:
        raise ValueError("purity needs a non-empty node set")
    counts: Dict[str, int] = {}
    for v in nodes:
        if v not in labels:
            raise ValueError(f"node {v} has no community label")
        counts[labels[v]] = counts.get(labels[v], 0) + 1
    return max(counts.values()) / len(nodes)


def _f1(found: NodeSet, truth: NodeSet) -> float:
    if not found and not truth:
        return 1.0
    return 2 * len(set(found) & set(truth)) / (len(found) + len(truth))


def rank_f1(ours: Sequence[Iterable[int]], exact: Sequence[Iterable[int]]) -> float:
    """
    Mean over ranks of the F1 score between our i-th set and the exact i-th set.

    Raises:
        ValueError: If the rankings are empty or of different lengths
    """
    if len(ours) != len(exact):
        raise ValueError(f"ranking lengths differ: {len(ours)} vs {len(exact)}")
    if not ours:
        raise ValueError("rank_f1 needs non-empty rankings")
    return sum(_f1(NodeSet(a), NodeSet(b)) for a, b in zip(ours, exact)) / len(ours)


def load_labels(path: Union[str, Path], graph: Optional[UncertainGraph] = None) -> Dict[int, str]:
    """
    Load a "node community-id" file.

    Node tokens are translated through the graph's original labels when a
    graph is given, otherwise read as integer ids.

    Raises:
        GraphFormatError: On malformed lines or unknown nodes
    """
    lookup = {label: i for i, label in enumerate(graph.labels)} if graph is not None and graph.labels else None
    labels: Dict[int, str] = {}
    text = Path(path).read_text(encoding='utf-8')
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError("expected 'node community-id'", str(path), line_number)
        node, community = tokens
        if lookup is not None:
            if node not in lookup:
                raise GraphFormatError(f"unknown node {node!r}", str(path), line_number)
            labels[lookup[node]] = community
        else:
            try:
                labels[int(node)] = community
            except ValueError:
                raise GraphFormatError(f"node id {node!r} is not an integer", str(path), line_number)
    return labels
