import itertools

import networkx as nx
import numpy as np
import pytest

from conftest import random_graph
from src.errors import PatternTooLargeError
from src.graph_core import builtin_pattern
from src.motifs import degeneracy_order, list_h_cliques, list_pattern_instances


def test_degeneracy_order_covers_every_node(bridged_triangles):
    order = degeneracy_order(bridged_triangles)
    assert sorted(order) == list(range(6))


@pytest.mark.parametrize('h, expected', [(2, 10), (3, 10), (4, 5), (5, 1), (6, 0)])
def test_cliques_of_k5(h, expected):
    assert list_h_cliques(nx.complete_graph(5), h).count == expected


def test_cliques_match_networkx_on_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(20):
        graph = random_graph(rng, 9, 0.5)
        for h in (3, 4):
            expected = sorted(tuple(sorted(c)) for c in nx.enumerate_all_cliques(graph) if len(c) == h)
            assert list(list_h_cliques(graph, h).cliques) == expected


def test_clique_completions_and_degrees():
    index = list_h_cliques(nx.complete_graph(3), 3)
    assert index.cliques == ((0, 1, 2),)
    assert index.lambda_set == (((0, 1), (2,)), ((0, 2), (1,)), ((1, 2), (0,)))
    assert index.degrees == {0: 1, 1: 1, 2: 1}


def test_clique_size_below_two_is_rejected():
    with pytest.raises(ValueError):
        list_h_cliques(nx.complete_graph(3), 1)


@pytest.mark.parametrize('name, expected', [
    ('edge', 6), ('triangle', 4), ('2-star', 12), ('3-star', 4),
    ('4-cycle', 3), ('diamond', 6), ('4-clique', 1),
])
def test_non_induced_instances_in_k4(name, expected):
    index = list_pattern_instances(nx.complete_graph(4), builtin_pattern(name))
    assert index.total == expected
    assert len(index.instances) == expected


def test_instances_are_grouped_by_node_set():
    index = list_pattern_instances(nx.complete_graph(3), builtin_pattern('2-star'))
    assert index.groups == (((0, 1, 2), 3),)
    assert index.degrees == {0: 3, 1: 3, 2: 3}


def test_edge_pattern_matches_edge_count():
    rng = np.random.default_rng(2)
    graph = random_graph(rng, 8, 0.4)
    index = list_pattern_instances(graph, builtin_pattern('edge'))
    assert index.total == graph.number_of_edges()
    assert all(len(nodes) == 2 for nodes, _ in index.groups)


def test_triangle_pattern_agrees_with_clique_listing():
    rng = np.random.default_rng(5)
    for _ in range(10):
        graph = random_graph(rng, 8, 0.5)
        by_pattern = sorted(tuple(nodes) for nodes, _ in list_pattern_instances(graph, builtin_pattern('triangle')).instances)
        assert by_pattern == list(list_h_cliques(graph, 3).cliques)


def test_pattern_over_node_cap_is_rejected():
    with pytest.raises(PatternTooLargeError):
        list_pattern_instances(nx.complete_graph(5), builtin_pattern('4-clique'), node_cap=3)


def test_instance_edges_lie_inside_the_graph():
    graph = nx.cycle_graph(5)
    for nodes, edges in list_pattern_instances(graph, builtin_pattern('2-star')).instances:
        assert all(graph.has_edge(u, v) for u, v in edges)
        assert set(itertools.chain.from_iterable(edges)) == set(nodes)
