import itertools
import math

import numpy as np
import pytest

from src.errors import GraphFormatError
from src.graph_core import (ExponentialCdf, NodeSet, NormalRandom, ReciprocalDegree, UncertainGraph,
                            UniformRandom, assign_probabilities, builtin_pattern, induced_density,
                            iter_worlds, load_pattern, load_uncertain_graph, load_weighted_edges,
                            parse_probability_model, sample_world, sample_worlds, world_from_mask)
from src.notions import DensityNotion


def test_node_set_is_canonical():
    nodes = NodeSet([3, 1, 3, 2])
    assert nodes == (1, 2, 3)
    assert NodeSet.from_mask(nodes.to_mask()) == nodes
    assert nodes.union([0]) == (0, 1, 2, 3)
    assert NodeSet([1, 3]).issubset(nodes)


def test_load_running_example(data_dir):
    graph = load_uncertain_graph(data_dir / 'fig1.txt')
    assert graph.node_count == 4
    assert graph.edge_count == 3
    assert graph.probability(1, 3) == pytest.approx(0.7)
    assert graph.probability(3, 1) == pytest.approx(0.7)
    assert graph.probability(2, 3) == 0.0
    assert graph.adjacency[0] == ((1, 0.4), (2, 0.4))


def test_load_accepts_comments_and_crlf(tmp_path):
    path = tmp_path / 'g.txt'
    path.write_bytes(b"# header\r\n0 1 0.5\r\n\r\n1 2 1.0\r\n")
    graph = load_uncertain_graph(path)
    assert graph.edges == ((0, 1, 0.5), (1, 2, 1.0))


def test_string_node_names_become_dense_ids(tmp_path):
    path = tmp_path / 'g.txt'
    path.write_text("alice bob 0.5\nbob carol 0.25\n")
    graph = load_uncertain_graph(path)
    assert graph.labels == ('alice', 'bob', 'carol')
    assert graph.label_of(2) == 'carol'


@pytest.mark.parametrize('content, line', [
    ("0 1 0.5\n0 2 abc\n", 2),
    ("0 1 1.5\n", 1),
    ("0 1 0\n", 1),
    ("0 1 0.5\n1 0 0.3\n", 2),
    ("0 0 0.5\n", 1),
    ("0 1\n", 1),
])
def test_malformed_graph_reports_line(tmp_path, content, line):
    path = tmp_path / 'bad.txt'
    path.write_text(content)
    with pytest.raises(GraphFormatError) as info:
        load_uncertain_graph(path)
    assert info.value.line_number == line
    assert f":{line}:" in str(info.value)


def test_graph_rejects_invalid_edges():
    with pytest.raises(ValueError):
        UncertainGraph.from_edges([(0, 1, 0.5), (1, 0, 0.5)])
    with pytest.raises(ValueError):
        UncertainGraph.from_edges([(0, 1, 1.2)])
    with pytest.raises(ValueError):
        UncertainGraph(2, ((0, 2, 0.5),))


def test_world_probabilities_sum_to_one(fig1):
    worlds = list(iter_worlds(fig1))
    assert len(worlds) == 8
    assert sum(w.probability for w in worlds) == pytest.approx(1.0)


def test_world_probability_of_one_world(fig1):
    world = world_from_mask(fig1, [False, True, True])
    assert world.probability == pytest.approx(0.6 * 0.4 * 0.7)
    assert world.edge_list() == [(0, 2), (1, 3)]
    assert sorted(world.graph.nodes) == [0, 1, 2, 3]


def test_iter_worlds_refuses_large_graphs():
    graph = UncertainGraph.from_edges([(i, i + 1, 0.5) for i in range(22)])
    with pytest.raises(ValueError):
        next(iter_worlds(graph))


def test_sampling_is_a_function_of_seed_and_round(fig1):
    first = sample_world(fig1, 7, 12)
    again = sample_world(fig1, 7, 12)
    assert np.array_equal(first.present_edges, again.present_edges)
    assert first.key == again.key
    outcomes = {sample_world(fig1, 7, r).key for r in range(50)}
    assert len(outcomes) > 1


def test_chunked_sampling_matches_single_rounds():
    graph = UncertainGraph.from_edges([(i, i + 1, 0.3 + 0.05 * i) for i in range(9)])
    chunk = list(sample_worlds(graph, 21, 5, 40))
    assert len(chunk) == 35
    for round_index, world in enumerate(chunk, start=5):
        assert world.key == sample_world(graph, 21, round_index).key
    tail = list(sample_worlds(graph, 21, 17, 40))
    assert [w.key for w in tail] == [w.key for w in chunk[12:]]


def test_sampled_edge_frequency_matches_probability(fig1):
    present = np.array([world.present_edges for world in sample_worlds(fig1, 3, 0, 100_000)])
    frequencies = present.mean(axis=0)
    assert frequencies == pytest.approx([0.4, 0.4, 0.7], abs=0.01)
    assert 0.695 <= frequencies[2] <= 0.705


def test_sampled_world_probability_is_computed_on_demand(fig1):
    world = sample_world(fig1, 3, 0)
    expected = np.prod(np.where(world.present_edges, [0.4, 0.4, 0.7], [0.6, 0.6, 0.3]))
    assert world.probability == pytest.approx(expected)


def test_induced_density_edge(fig1):
    world = world_from_mask(fig1, [True, True, True])
    assert induced_density(world, [0, 1, 2, 3], DensityNotion.edge()) == pytest.approx(3 / 4)
    assert induced_density(world, [2, 3], DensityNotion.edge()) == 0
    with pytest.raises(ValueError):
        induced_density(world, [], DensityNotion.edge())


def test_two_clique_density_is_edge_density():
    rng = np.random.default_rng(12)
    graph = UncertainGraph.from_edges(
        [(u, v, 0.5) for u in range(6) for v in range(u + 1, 6) if rng.random() < 0.5], node_count=6)
    world = world_from_mask(graph, np.ones(graph.edge_count, dtype=bool))
    for size in range(1, 7):
        for nodes in itertools.combinations(range(6), size):
            assert (induced_density(world, nodes, DensityNotion.clique(2))
                    == induced_density(world, nodes, DensityNotion.edge()))


def test_exponential_cdf_model():
    graph = assign_probabilities([(0, 1, 20), (1, 2, 0)], ExponentialCdf(20), floor=1e-6)
    assert graph.probability(0, 1) == pytest.approx(1 - math.exp(-1))
    assert graph.probability(1, 2) == pytest.approx(1e-6)


def test_exponential_cdf_rejects_bad_mu():
    with pytest.raises(ValueError):
        assign_probabilities([(0, 1, 1)], ExponentialCdf(0))


def test_reciprocal_degree_model():
    graph = assign_probabilities([(0, 1, 0), (0, 2, 0), (0, 3, 0), (2, 3, 0)], ReciprocalDegree())
    assert graph.probability(0, 1) == pytest.approx(1 / 3)
    assert graph.probability(2, 3) == pytest.approx(1 / 2)


def test_random_models_are_seeded_and_clamped():
    edges = [(i, i + 1, 0) for i in range(30)]
    first = assign_probabilities(edges, UniformRandom(seed=5))
    second = assign_probabilities(edges, UniformRandom(seed=5))
    assert first.edges == second.edges
    normal = assign_probabilities(edges, NormalRandom(0.5, 2.0, seed=1), floor=0.01)
    assert all(0.01 <= p <= 1.0 for _, _, p in normal.edges)


def test_parse_probability_model():
    assert parse_probability_model('exp:10') == ExponentialCdf(10.0)
    assert parse_probability_model('reciprocal') == ReciprocalDegree()
    assert parse_probability_model('uniform:3') == UniformRandom(seed=3)
    assert parse_probability_model('normal:0.6:0.1:2') == NormalRandom(0.6, 0.1, 2)
    with pytest.raises(ValueError):
        parse_probability_model('normal')
    with pytest.raises(ValueError):
        parse_probability_model('poisson:3')


def test_load_weighted_edges(data_dir):
    edges, labels = load_weighted_edges(data_dir / 'interactions.txt')
    assert labels == ('a', 'b', 'c', 'd')
    assert (0, 1, 12.0) in edges
    graph = assign_probabilities(edges, ExponentialCdf(20), labels=labels)
    assert graph.label_of(3) == 'd'


@pytest.mark.parametrize('name, automorphisms', [
    ('edge', 2), ('triangle', 6), ('2-star', 2), ('3-star', 6),
    ('diamond', 4), ('4-cycle', 8), ('4-clique', 24),
])
def test_builtin_pattern_automorphisms(name, automorphisms):
    assert builtin_pattern(name).automorphism_count == automorphisms


def test_load_pattern_from_file_and_name(data_dir):
    diamond = load_pattern(data_dir / 'patterns' / 'diamond.txt')
    assert diamond.node_count == 4
    assert len(diamond.edges) == 5
    assert diamond.automorphism_count == 4
    assert load_pattern('triangle').is_clique
    assert load_pattern('missing/dir/3-star.txt').automorphism_count == 6


def test_disconnected_pattern_file_is_rejected(tmp_path):
    path = tmp_path / 'two_edges.txt'
    path.write_text("0 1\n2 3\n")
    with pytest.raises(GraphFormatError):
        load_pattern(path)
