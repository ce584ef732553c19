"""
Shared fixtures: the four-node running example, bridged triangles,
brute-force densest subgraphs and seeded random graphs.
"""

import itertools
from fractions import Fraction
from pathlib import Path
from typing import List, Tuple

import networkx as nx
import numpy as np
import pytest

from src.config import get_settings
from src.graph_core import NodeSet, UncertainGraph, induced_density

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'

A, B, C, D = 0, 1, 2, 3


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def fig1() -> UncertainGraph:
    """A-B 0.4, A-C 0.4, B-D 0.7."""
    return UncertainGraph.from_edges([(A, B, 0.4), (A, C, 0.4), (B, D, 0.7)], node_count=4)


@pytest.fixture
def bridged_triangles() -> nx.Graph:
    """Triangles ABC and DEF joined by C-D."""
    graph = nx.Graph()
    graph.add_edges_from([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
    return graph


def brute_force_densest(graph: nx.Graph, notion) -> Tuple[Fraction, List[NodeSet]]:
    """Optimum and every maximizing node set, by scoring all non-empty subsets."""
    nodes = sorted(graph.nodes)
    best = Fraction(0)
    winners: List[NodeSet] = []
    for size in range(1, len(nodes) + 1):
        for subset in itertools.combinations(nodes, size):
            density = induced_density(graph, subset, notion)
            if density > best:
                best, winners = density, [NodeSet(subset)]
            elif density == best:
                winners.append(NodeSet(subset))
    return best, winners


def random_graph(rng: np.random.Generator, n: int, edge_probability: float) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < edge_probability:
            graph.add_edge(u, v)
    return graph


def random_uncertain_graph(rng: np.random.Generator, n: int, edge_probability: float) -> UncertainGraph:
    skeleton = random_graph(rng, n, edge_probability)
    return UncertainGraph.from_edges(
        [(u, v, float(np.round(rng.uniform(0.1, 1.0), 2))) for u, v in skeleton.edges],
        node_count=n)
