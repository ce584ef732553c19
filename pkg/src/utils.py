"""
Helpers shared by the subcommands: argument parsing and validation, graph
loading with a probability model, synthetic graphs.
"""

import argparse
import logging
from pathlib import Path
from typing import List, Optional, Union

import networkx as nx

from .graph_core import (NodeSet, UncertainGraph, UniformRandom, assign_probabilities,
                         load_uncertain_graph, load_weighted_edges, parse_probability_model)

logger = logging.getLogger(__name__)


def positive_int(value: str) -> int:
    """argparse type for integers >= 1."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {number}")
    return number


def parse_node_set(text: str, graph: Optional[UncertainGraph] = None) -> NodeSet:
    """
    Parse a comma-separated node list such as "1,3".

    Tokens are matched against the graph's original node names first and
    read as dense ids otherwise.

    Args:
        text: Comma-separated node tokens
        graph: Graph whose names and id range are checked

    Returns:
        NodeSet of dense ids

    Raises:
        ValueError: If the list is empty or names an unknown node
    """
    tokens = [token.strip() for token in text.split(',') if token.strip()]
    if not tokens:
        raise ValueError(f"Invalid node set {text!r}: no nodes given")
    lookup = {label: i for i, label in enumerate(graph.labels)} if graph is not None else {}
    ids = []
    for token in tokens:
        if token in lookup:
            ids.append(lookup[token])
            continue
        try:
            node = int(token)
        except ValueError:
            raise ValueError(f"Invalid node set {text!r}: unknown node {token!r}")
        if graph is not None and not 0 <= node < graph.node_count:
            raise ValueError(f"Invalid node set {text!r}: node {node} outside [0, {graph.node_count})")
        ids.append(node)
    return NodeSet(ids)


def node_names(graph: UncertainGraph, nodes: NodeSet) -> List[str]:
    return [graph.label_of(v) for v in nodes]


def load_graph(path: Union[str, Path], prob_model: str = 'file') -> UncertainGraph:
    """
    Load a graph file, optionally re-deriving its probabilities.

    With ``prob_model == 'file'`` the third column is the probability;
    otherwise it is an interaction count fed to the named model.
    """
    if prob_model == 'file':
        return load_uncertain_graph(path)
    model = parse_probability_model(prob_model)
    edges, labels = load_weighted_edges(path)
    graph = assign_probabilities(edges, model, node_count=len(labels), labels=labels)
    logger.info(f"Derived probabilities for {path} with {model}: "
                f"{graph.node_count} nodes, {graph.edge_count} edges")
    return graph


def synthetic_graph(spec: str, seed: int) -> UncertainGraph:
    """
    Seeded synthetic uncertain graph with uniform edge probabilities.

    Args:
        spec: "er:<n>:<m>" (G(n, m)) or "ba:<n>:<m_attach>" (Barabási–Albert)
        seed: Seed of both the topology and the probabilities

    Raises:
        ValueError: On malformed specifiers
    """
    kind, *params = spec.split(':')
    try:
        n, m = (int(x) for x in params)
    except ValueError:
        raise ValueError(f"Invalid synthetic graph {spec!r}. Expected er:<n>:<m> or ba:<n>:<m_attach>")
    if kind == 'er':
        skeleton = nx.gnm_random_graph(n, m, seed=seed)
    elif kind == 'ba':
        if not 1 <= m < n:
            raise ValueError(f"Invalid synthetic graph {spec!r}: need 1 <= m_attach < n")
        skeleton = nx.barabasi_albert_graph(n, m, seed=seed)
    else:
        raise ValueError(f"Unknown synthetic graph kind {kind!r}; use er or ba")
    edges = [(u, v, 0.0) for u, v in skeleton.edges]
    return assign_probabilities(edges, UniformRandom(seed=seed), node_count=n)
