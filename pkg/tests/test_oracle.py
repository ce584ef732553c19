import networkx as nx
import numpy as np
import pytest

from conftest import random_graph, random_uncertain_graph
from src.config import Settings, get_settings
from src.errors import GraphTooLargeError
from src.graph_core import UncertainGraph
from src.notions import DensityNotion
from src.oracle import (count_matchings, exact_gamma, exact_sweep, exact_tau, exact_topk, exact_topk_nds,
                        matching_identity_check)

EDGE = DensityNotion.edge()


@pytest.mark.parametrize('nodes, tau', [
    ((0, 1), 0.072),
    ((0, 2), 0.24),
    ((1, 3), 0.42),
    ((0, 1, 2), 0.048),
    ((0, 1, 3), 0.168),
    ((0, 1, 2, 3), 0.28),
    ((2, 3), 0.0),
    ((0,), 0.0),
])
def test_running_example_tau(fig1, nodes, tau):
    assert exact_tau(fig1, nodes, EDGE) == pytest.approx(tau)


def test_running_example_gamma(fig1):
    assert exact_gamma(fig1, (1, 3), EDGE) == pytest.approx(0.7)
    assert exact_gamma(fig1, (0, 1), EDGE) == pytest.approx(0.568)


def test_tau_mass_excludes_the_empty_world(fig1):
    sweep = exact_sweep(fig1, EDGE)
    assert sweep.world_probs.sum() == pytest.approx(1.0)
    empty = sweep.world_probs[sweep.world_unions < 0]
    assert empty.sum() == pytest.approx(0.6 * 0.6 * 0.3)


def test_containment_dominates_densest_probability(fig1):
    rng = np.random.default_rng(41)
    graphs = [fig1] + [random_uncertain_graph(rng, 6, 0.5) for _ in range(8)]
    for graph in graphs:
        for notion in (EDGE, DensityNotion.clique(3)):
            sweep = exact_sweep(graph, notion)
            assert np.all(sweep.gamma[1:] >= sweep.tau[1:] - 1e-12)
            for mask in range(1, sweep.gamma.shape[0]):
                for extra in range(graph.node_count):
                    if not mask >> extra & 1:
                        assert sweep.gamma[mask] >= sweep.gamma[mask | 1 << extra] - 1e-12


def test_exact_topk(fig1):
    assert exact_topk(fig1, EDGE, 1) == [((1, 3), pytest.approx(0.42))]
    top3 = exact_topk(fig1, EDGE, 3)
    assert [nodes for nodes, _ in top3] == [(1, 3), (0, 1, 2, 3), (0, 2)]
    assert [tau for _, tau in top3] == pytest.approx([0.42, 0.28, 0.24])
    with pytest.raises(ValueError):
        exact_topk(fig1, EDGE, 0)


def test_exact_topk_nds(fig1):
    top = exact_topk_nds(fig1, EDGE, 2, 2)
    assert top[0][0] == (1, 3)
    assert top[0][1] == pytest.approx(0.7)
    assert top[1][0] == (0, 1)
    assert top[1][1] == pytest.approx(0.568)


def test_node_set_outside_graph_is_rejected(fig1):
    with pytest.raises(ValueError):
        exact_tau(fig1, (0, 9), EDGE)
    with pytest.raises(ValueError):
        exact_tau(fig1, (), EDGE)


def test_certain_graph_has_one_world(bridged_triangles):
    graph = UncertainGraph.from_edges([(u, v, 1.0) for u, v in bridged_triangles.edges], node_count=6)
    assert exact_tau(graph, range(6), EDGE) == pytest.approx(1.0)
    clique = DensityNotion.clique(3)
    for nodes in ((0, 1, 2), (3, 4, 5), tuple(range(6))):
        assert exact_tau(graph, nodes, clique) == pytest.approx(1.0)


def test_taus_sum_to_at_least_nondegenerate_mass():
    rng = np.random.default_rng(21)
    graph = UncertainGraph.from_edges([(u, v, 0.5) for u, v in random_graph(rng, 6, 0.5).edges], node_count=6)
    sweep = exact_sweep(graph, EDGE)
    nondegenerate = sweep.world_probs[sweep.world_unions >= 0].sum()
    assert sweep.tau.sum() >= nondegenerate - 1e-12


def test_oracle_limits(monkeypatch):
    wide = UncertainGraph.from_edges([(i, i + 1, 0.5) for i in range(10)])
    with pytest.raises(GraphTooLargeError):
        exact_sweep(wide, EDGE)
    monkeypatch.setenv('UDENSE_ORACLE_MAX_EDGES', '2')
    get_settings.cache_clear()
    assert Settings().oracle_max_edges == 2
    long_path = UncertainGraph.from_edges([(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)])
    with pytest.raises(GraphTooLargeError):
        exact_tau(long_path, (0, 1), EDGE)


def test_matching_identity_on_triangle():
    lhs, rhs = matching_identity_check(nx.complete_graph(3))
    assert lhs == pytest.approx(0.5)
    assert rhs == pytest.approx(0.5)


def test_matching_identity_on_random_graphs():
    rng = np.random.default_rng(6)
    for _ in range(5):
        graph = random_graph(rng, 6, 0.4)
        lhs, rhs = matching_identity_check(graph)
        assert lhs == pytest.approx(rhs)


def test_matching_identity_beyond_subset_oracle():
    graph = nx.path_graph(9)
    lhs, rhs = matching_identity_check(graph)
    assert lhs == pytest.approx(rhs)
    assert rhs == pytest.approx(count_matchings(list(graph.edges)) / 2 ** 8)


def test_matching_identity_refuses_many_edges():
    with pytest.raises(GraphTooLargeError):
        matching_identity_check(nx.complete_graph(7))


def test_count_matchings():
    assert count_matchings([(0, 1), (1, 2), (2, 3)]) == 5
    assert count_matchings([]) == 1
    assert count_matchings(list(nx.complete_graph(4).edges)) == 10
