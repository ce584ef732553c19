"""
Exhaustive ground truth for small uncertain graphs.

Every possible world (over the uncertain edges; p = 1 edges are always
present) is scored against every non-empty node subset at once: instance
counts come from a world-by-instance presence matrix times an
instance-by-subset containment matrix, and densities are compared exactly
by scaling counts with lcm(1..n) / |subset|.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .config import get_settings
from .errors import GraphTooLargeError
from .graph_core import NodeSet, UncertainGraph
from .motifs import list_h_cliques, list_pattern_instances
from .notions import DensityNotion
from .parallel import chunk_ranges, map_chunks

logger = logging.getLogger(__name__)

_BATCH = 1024


@dataclass(frozen=True)
class _SweepTask:
    start: int
    stop: int
    p_uncertain: np.ndarray
    inst_edges: np.ndarray
    inst_required: np.ndarray
    inst_in_subset: np.ndarray
    multiplier: np.ndarray
    masks: np.ndarray


@dataclass
class _SweepPart:
    tau: np.ndarray
    gamma: np.ndarray
    closure: np.ndarray
    probs: np.ndarray
    unions: np.ndarray


def _check_size(graph: UncertainGraph, max_edges: Optional[int] = None, max_nodes: Optional[int] = None):
    settings = get_settings()
    max_edges = settings.oracle_max_edges if max_edges is None else max_edges
    max_nodes = settings.oracle_max_nodes if max_nodes is None else max_nodes
    uncertain = int(np.sum(graph.probabilities < 1.0))
    if uncertain > max_edges:
        raise GraphTooLargeError(f"{uncertain} uncertain edges exceed the oracle limit of {max_edges}")
    if graph.node_count > max_nodes:
        raise GraphTooLargeError(f"{graph.node_count} nodes exceed the oracle limit of {max_nodes}")


def _skeleton_instances(graph: UncertainGraph, notion: DensityNotion) -> List[Tuple[NodeSet, List[Tuple[int, int]]]]:
    """(node set, edges) of every notion instance in the deterministic skeleton."""
    skeleton = graph.skeleton()
    if notion.kind == 'edge':
        return [(NodeSet((u, v)), [(u, v)]) for u, v, _ in graph.edges]
    if notion.kind == 'clique':
        return [(NodeSet(c), [(c[i], c[j]) for i in range(len(c)) for j in range(i + 1, len(c))])
                for c in list_h_cliques(skeleton, notion.h).cliques]
    return [(nodes, list(edges)) for nodes, edges in list_pattern_instances(skeleton, notion.pattern).instances]


def _sweep_part(task: _SweepTask) -> _SweepPart:
    subsets = task.masks.shape[0]
    tau = np.zeros(subsets)
    gamma = np.zeros(subsets)
    full = int(task.masks[-1])
    closure = np.full(subsets, full, dtype=np.int64)
    probs, unions = [], []
    mu = task.p_uncertain.shape[0]
    shifts = np.arange(mu, dtype=np.int64)

    for begin in range(task.start, task.stop, _BATCH):
        index = np.arange(begin, min(begin + _BATCH, task.stop), dtype=np.int64)
        bits = ((index[:, None] >> shifts[None, :]) & 1).astype(bool)
        prob = np.prod(np.where(bits, task.p_uncertain[None, :], 1.0 - task.p_uncertain[None, :]), axis=1)
        present = (bits.astype(np.int64) @ task.inst_edges.T) == task.inst_required[None, :]
        counts = present.astype(np.int64) @ task.inst_in_subset
        scaled = counts * task.multiplier[None, :]
        best = scaled.max(axis=1)
        nondegenerate = best > 0
        is_max = (scaled == best[:, None]) & nondegenerate[:, None]
        union = np.bitwise_or.reduce(np.where(is_max, task.masks[None, :], 0), axis=1)
        contain = ((task.masks[None, :] & ~union[:, None]) == 0) & nondegenerate[:, None]
        contain[:, 0] = False

        tau += prob @ is_max
        gamma += prob @ contain
        closure &= np.bitwise_and.reduce(np.where(contain, union[:, None], full), axis=0)
        probs.append(prob)
        unions.append(np.where(nondegenerate, union, -1))

    return _SweepPart(tau, gamma, closure,
                      np.concatenate(probs) if probs else np.zeros(0),
                      np.concatenate(unions) if unions else np.zeros(0, dtype=np.int64))


@dataclass
class ExactSweep:
    """τ and γ of every node subset, plus per-world data, from one exhaustive pass."""

    node_count: int
    tau: np.ndarray
    gamma: np.ndarray
    closure: np.ndarray
    world_probs: np.ndarray
    world_unions: np.ndarray

    def tau_of(self, nodes: Iterable[int]) -> float:
        return float(self.tau[self._mask(nodes)])

    def gamma_of(self, nodes: Iterable[int]) -> float:
        return float(self.gamma[self._mask(nodes)])

    def _mask(self, nodes: Iterable[int]) -> int:
        nodes = NodeSet(nodes)
        if not nodes:
            raise ValueError("node set must be non-empty")
        if nodes[-1] >= self.node_count or nodes[0] < 0:
            raise ValueError(f"node set {list(nodes)} outside [0, {self.node_count})")
        return nodes.to_mask()

    def ranked_tau(self, k: int) -> List[Tuple[NodeSet, float]]:
        masks = np.nonzero(self.tau > 0)[0]
        ranked = sorted(((NodeSet.from_mask(int(m)), float(self.tau[m])) for m in masks),
                        key=lambda item: (-round(item[1], 12), tuple(item[0])))
        return ranked[:k]

    def closed_sets(self, l_m: int) -> List[Tuple[NodeSet, float]]:
        """Closed sets of size >= l_m with γ > 0, ranked by γ, then size, then lexicographically."""
        masks = np.arange(self.tau.shape[0], dtype=np.int64)
        chosen = np.nonzero((self.gamma > 0) & (self.closure == masks))[0]
        closed = [(NodeSet.from_mask(int(m)), float(self.gamma[m])) for m in chosen]
        closed = [item for item in closed if len(item[0]) >= l_m]
        return sorted(closed, key=lambda item: (-round(item[1], 12), -len(item[0]), tuple(item[0])))

    def containing_world_sum(self, target_masks: Sequence[int], theta: int) -> float:
        """Σ (1 - Pr(G))^θ over worlds whose densest union contains at least one target."""
        hit = np.zeros(self.world_probs.shape[0], dtype=bool)
        valid = self.world_unions >= 0
        for mask in target_masks:
            hit |= valid & ((self.world_unions & mask) == mask)
        return float(np.sum((1.0 - self.world_probs[hit]) ** theta))


@lru_cache(maxsize=16)
def exact_sweep(graph: UncertainGraph, notion: DensityNotion, workers: Optional[int] = None) -> ExactSweep:
    """
    Enumerate every possible world and score every node subset.

    Raises:
        GraphTooLargeError: If the graph exceeds the oracle limits
    """
    _check_size(graph)
    n = graph.node_count
    uncertain = [i for i, p in enumerate(graph.probabilities) if p < 1.0]
    position = {i: j for j, i in enumerate(uncertain)}
    p_uncertain = graph.probabilities[uncertain].astype(float)

    instances = _skeleton_instances(graph, notion)
    masks = np.arange(1 << n, dtype=np.int64)
    inst_edges = np.zeros((len(instances), len(uncertain)), dtype=np.int64)
    inst_in_subset = np.zeros((len(instances), 1 << n), dtype=np.int64)
    for row, (nodes, edges) in enumerate(instances):
        for u, v in edges:
            edge = graph.edge_index[(min(u, v), max(u, v))]
            if edge in position:
                inst_edges[row, position[edge]] = 1
        node_mask = nodes.to_mask()
        inst_in_subset[row] = (masks & node_mask) == node_mask
    inst_required = inst_edges.sum(axis=1)

    sizes = np.array([bin(int(m)).count('1') for m in masks], dtype=np.int64)
    lcm = reduce(math.lcm, range(1, n + 1), 1)
    multiplier = np.where(sizes > 0, lcm // np.maximum(sizes, 1), 0).astype(np.int64)

    world_count = 1 << len(uncertain)
    workers = get_settings().threads if workers is None else workers
    tasks = [_SweepTask(start, stop, p_uncertain, inst_edges, inst_required, inst_in_subset, multiplier, masks)
             for start, stop in chunk_ranges(world_count, workers)]
    parts = map_chunks(_sweep_part, tasks, workers)

    sweep = ExactSweep(
        node_count=n,
        tau=sum((part.tau for part in parts), np.zeros(1 << n)),
        gamma=sum((part.gamma for part in parts), np.zeros(1 << n)),
        closure=reduce(np.bitwise_and, (part.closure for part in parts)),
        world_probs=np.concatenate([part.probs for part in parts]),
        world_unions=np.concatenate([part.unions for part in parts]),
    )
    logger.info(f"✓ Oracle swept {world_count} worlds x {(1 << n) - 1} subsets ({notion.label})")
    return sweep


def exact_tau(graph: UncertainGraph, nodes: Iterable[int], notion: DensityNotion) -> float:
    """Probability that ``nodes`` induces a densest subgraph."""
    return exact_sweep(graph, notion).tau_of(nodes)


def exact_gamma(graph: UncertainGraph, nodes: Iterable[int], notion: DensityNotion) -> float:
    """Probability that ``nodes`` lies inside some densest subgraph."""
    return exact_sweep(graph, notion).gamma_of(nodes)


def exact_topk(graph: UncertainGraph, notion: DensityNotion, k: int) -> List[Tuple[NodeSet, float]]:
    """True top-k most probable densest subgraphs, ties broken lexicographically."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return exact_sweep(graph, notion).ranked_tau(k)


def exact_topk_nds(graph: UncertainGraph, notion: DensityNotion, k: int, l_m: int) -> List[Tuple[NodeSet, float]]:
    """True top-k closed node sets of size >= l_m by containment probability."""
    if k < 1 or l_m < 1:
        raise ValueError("k and l_m must be at least 1")
    return exact_sweep(graph, notion).closed_sets(l_m)[:k]


def count_matchings(edges: Sequence[Tuple[int, int]]) -> int:
    """Number of matchings of an edge list, the empty matching included."""
    edges = list(edges)

    def count(i: int, used: frozenset) -> int:
        if i == len(edges):
            return 1
        u, v = edges[i]
        total = count(i + 1, used)
        if u not in used and v not in used:
            total += count(i + 1, used | {u, v})
        return total

    return count(0, frozenset())


def _matching_world_mass(edges: Sequence[Tuple[int, int]], node_count: int) -> float:
    """Probability that a half-probability world is a matching (every degree at most 1)."""
    m = len(edges)
    incidence = np.zeros((m, node_count), dtype=np.int64)
    for row, (u, v) in enumerate(edges):
        incidence[row, u] = incidence[row, v] = 1
    shifts = np.arange(m, dtype=np.int64)
    matched = 0
    for begin in range(0, 1 << m, _BATCH):
        index = np.arange(begin, min(begin + _BATCH, 1 << m), dtype=np.int64)
        bits = (index[:, None] >> shifts[None, :]) & 1
        matched += int(np.sum(np.all(bits @ incidence <= 1, axis=1)))
    return matched * 0.5 ** m


def matching_identity_check(det_graph: Union[nx.Graph, Sequence[Tuple[int, int]]]) -> Tuple[float, float]:
    """
    Cross-check densest-subgraph probabilities against matching counts.

    Every edge of ``det_graph`` gets p = 0.5 and two new nodes joined by a
    certain edge are added; the new pair is densest exactly in worlds that
    are matchings, so τ(pair) = 0.5^m · #matchings.

    Returns:
        (lhs, rhs) where lhs is τ of the new pair and rhs the matching count side

    Raises:
        GraphTooLargeError: If det_graph has more than 18 edges
        AssertionError: If the two sides differ
    """
    graph = det_graph if isinstance(det_graph, nx.Graph) else nx.Graph(list(det_graph))
    relabel = {v: i for i, v in enumerate(sorted(graph.nodes))}
    edges = sorted((min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in graph.edges())
    m, n = len(edges), len(relabel)
    if m > 18:
        raise GraphTooLargeError(f"{m} edges exceed the matching check limit of 18")

    rhs = 0.5 ** m * count_matchings(edges)
    if n + 2 <= get_settings().oracle_max_nodes:
        augmented = UncertainGraph.from_edges([(u, v, 0.5) for u, v in edges] + [(n, n + 1, 1.0)],
                                              node_count=n + 2)
        lhs = exact_tau(augmented, NodeSet((n, n + 1)), DensityNotion.edge())
    else:
        logger.info(f"{n + 2} nodes exceed the subset oracle; using the matching-world test")
        lhs = _matching_world_mass(edges, n)
    if abs(lhs - rhs) > 1e-12:
        raise AssertionError(f"matching identity violated: {lhs} != {rhs}")
    return lhs, rhs
