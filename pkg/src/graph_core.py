"""
Uncertain graphs, possible worlds and patterns.

An UncertainGraph holds the skeleton and one existence probability per
edge. A World is one deterministic instantiation stored as an edge bitset
plus its log-probability; it is materialised as a networkx graph only when
an algorithm needs adjacency.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .config import get_settings
from .errors import GraphFormatError

logger = logging.getLogger(__name__)

_SEED_MASK = (1 << 64) - 1
_UNIFORM_BATCH = 1 << 18


class NodeSet(tuple):
    """Canonical node set: a sorted, duplicate-free tuple of node ids."""

    def __new__(cls, members: Iterable[int] = ()):
        return super().__new__(cls, sorted({int(v) for v in members}))

    def issubset(self, other: Iterable[int]) -> bool:
        return set(self).issubset(other)

    def issuperset(self, other: Iterable[int]) -> bool:
        return set(self).issuperset(other)

    def union(self, *others: Iterable[int]) -> 'NodeSet':
        return NodeSet(itertools.chain(self, *others))

    def to_mask(self) -> int:
        mask = 0
        for v in self:
            mask |= 1 << v
        return mask

    @classmethod
    def from_mask(cls, mask: int) -> 'NodeSet':
        return cls(i for i in range(mask.bit_length()) if mask >> i & 1)

    def __repr__(self) -> str:
        return f"NodeSet({list(self)})"


def _read_data_lines(path: Union[str, Path]) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, tokens) for every non-blank, non-comment line."""
    text = Path(path).read_text(encoding='utf-8')
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        yield line_number, line.split()


def _dense_ids(tokens: Sequence[str]) -> Dict[str, int]:
    """Map raw node tokens to dense ids: numeric order when every token is an integer, else first appearance."""
    unique = list(dict.fromkeys(tokens))
    try:
        unique.sort(key=int)
    except ValueError:
        pass
    return {token: index for index, token in enumerate(unique)}


@dataclass(frozen=True)
class UncertainGraph:
    """Undirected graph whose edges exist independently with probability p(e) in (0, 1]."""

    node_count: int
    edges: Tuple[Tuple[int, int, float], ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        seen = set()
        for u, v, p in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) outside node range [0, {self.node_count})")
            if not 0.0 < p <= 1.0:
                raise ValueError(f"probability {p} of edge ({u}, {v}) outside (0, 1]")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int, float]],
                   node_count: Optional[int] = None,
                   labels: Sequence[str] = ()) -> 'UncertainGraph':
        """Build a graph from (u, v, p) triples; edges are stored with u < v."""
        normalized = tuple((min(int(u), int(v)), max(int(u), int(v)), float(p)) for u, v, p in edges)
        if node_count is None:
            node_count = 1 + max((v for _, v, _ in normalized), default=-1)
        return cls(node_count, normalized, tuple(labels))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, _, p in self.edges], dtype=float)

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {(u, v): i for i, (u, v, _) in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> Tuple[Tuple[Tuple[int, float], ...], ...]:
        """Per-node sorted neighbor list with probabilities."""
        neighbors: List[List[Tuple[int, float]]] = [[] for _ in range(self.node_count)]
        for u, v, p in self.edges:
            neighbors[u].append((v, p))
            neighbors[v].append((u, p))
        return tuple(tuple(sorted(row)) for row in neighbors)

    def probability(self, u: int, v: int) -> float:
        """Existence probability of edge {u, v}, 0.0 when absent from the skeleton."""
        index = self.edge_index.get((min(u, v), max(u, v)))
        return 0.0 if index is None else self.edges[index][2]

    def skeleton(self) -> nx.Graph:
        """Deterministic graph with every edge present; edge attribute 'p' holds the probability."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from((u, v, {'p': p}) for u, v, p in self.edges)
        return graph

    def label_of(self, node: int) -> str:
        return self.labels[node] if self.labels else str(node)


def load_uncertain_graph(path: Union[str, Path]) -> UncertainGraph:
    """
    Load an uncertain graph from a "u v p" edge list.

    Args:
        path: UTF-8 text file; '#' lines are comments, LF or CRLF accepted

    Returns:
        UncertainGraph with node ids renumbered densely

    Raises:
        GraphFormatError: On malformed lines, probabilities outside (0, 1],
            self-loops or duplicate edges (message carries the line number)
    """
    rows = []
    for line_number, tokens in _read_data_lines(path):
        if len(tokens) != 3:
            raise GraphFormatError(f"expected 'u v p', got {len(tokens)} fields", str(path), line_number)
        u, v, raw_p = tokens
        try:
            p = float(raw_p)
        except ValueError:
            raise GraphFormatError(f"probability {raw_p!r} is not a number", str(path), line_number)
        if not 0.0 < p <= 1.0:
            raise GraphFormatError(f"probability {p} outside (0, 1]", str(path), line_number)
        if u == v:
            raise GraphFormatError(f"self-loop on node {u}", str(path), line_number)
        rows.append((line_number, u, v, p))

    ids = _dense_ids([token for _, u, v, _ in rows for token in (u, v)])
    seen: Dict[Tuple[int, int], int] = {}
    edges = []
    for line_number, u, v, p in rows:
        a, b = sorted((ids[u], ids[v]))
        if (a, b) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v}), first seen on line {seen[(a, b)]}",
                                   str(path), line_number)
        seen[(a, b)] = line_number
        edges.append((a, b, p))

    labels = tuple(sorted(ids, key=ids.get))
    graph = UncertainGraph(len(ids), tuple(edges), labels)
    logger.info(f"Loaded uncertain graph {path}: {graph.node_count} nodes, {graph.edge_count} edges")
    return graph


def load_weighted_edges(path: Union[str, Path]) -> Tuple[List[Tuple[int, int, float]], Tuple[str, ...]]:
    """
    Load a "u v t" interaction-count edge list for assign_probabilities.

    Returns:
        (edges with dense ids, labels in id order)

    Raises:
        GraphFormatError: On malformed lines, negative counts, self-loops or duplicates
    """
    rows = []
    for line_number, tokens in _read_data_lines(path):
        if len(tokens) not in (2, 3):
            raise GraphFormatError("expected 'u v [t]'", str(path), line_number)
        u, v = tokens[0], tokens[1]
        try:
            t = float(tokens[2]) if len(tokens) == 3 else 0.0
        except ValueError:
            raise GraphFormatError(f"weight {tokens[2]!r} is not a number", str(path), line_number)
        if t < 0:
            raise GraphFormatError(f"negative interaction count {t}", str(path), line_number)
        if u == v:
            raise GraphFormatError(f"self-loop on node {u}", str(path), line_number)
        rows.append((line_number, u, v, t))

    ids = _dense_ids([token for _, u, v, _ in rows for token in (u, v)])
    seen = set()
    edges = []
    for line_number, u, v, t in rows:
        a, b = sorted((ids[u], ids[v]))
        if (a, b) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", str(path), line_number)
        seen.add((a, b))
        edges.append((a, b, t))
    return edges, tuple(sorted(ids, key=ids.get))


# Edge-probability models


@dataclass(frozen=True)
class ExponentialCdf:
    """p = 1 - exp(-t / mu) for an edge with t interactions."""
    mu: float = 20.0


@dataclass(frozen=True)
class ReciprocalDegree:
    """p = 1 / max(deg(u), deg(v))."""


@dataclass(frozen=True)
class UniformRandom:
    low: float = 0.0
    high: float = 1.0
    seed: int = 0


@dataclass(frozen=True)
class NormalRandom:
    mean: float = 0.5
    std: float = 0.15
    seed: int = 0


ProbabilityModel = Union[ExponentialCdf, ReciprocalDegree, UniformRandom, NormalRandom]


def parse_probability_model(spec: str) -> ProbabilityModel:
    """
    Parse a model specifier: exp:<mu>, reciprocal, uniform[:seed], normal:<mean>[:<std>[:seed]].

    Raises:
        ValueError: On unknown model names or malformed parameters
    """
    name, _, rest = spec.partition(':')
    params = [x for x in rest.split(':') if x] if rest else []
    try:
        if name in ('exp', 'exponential', 'exponential_cdf'):
            return ExponentialCdf(float(params[0]) if params else 20.0)
        if name in ('reciprocal', 'reciprocal_out_degree'):
            return ReciprocalDegree()
        if name == 'uniform':
            return UniformRandom(seed=int(params[0]) if params else 0)
        if name == 'normal':
            if not params:
                raise ValueError("normal model needs a mean")
            std = float(params[1]) if len(params) > 1 else 0.15
            seed = int(params[2]) if len(params) > 2 else 0
            return NormalRandom(float(params[0]), std, seed)
    except (IndexError, ValueError) as e:
        raise ValueError(f"Invalid probability model {spec!r}: {str(e)}")
    raise ValueError(f"Unknown probability model {spec!r}")


def assign_probabilities(edges: Sequence[Tuple[int, int, float]],
                         model: ProbabilityModel,
                         floor: Optional[float] = None,
                         node_count: Optional[int] = None,
                         labels: Sequence[str] = ()) -> UncertainGraph:
    """
    Derive edge probabilities for a weighted edge list.

    Args:
        edges: (u, v, t) triples; t is the interaction count (ignored by degree/random models)
        model: One of ExponentialCdf, ReciprocalDegree, UniformRandom, NormalRandom
        floor: Probability used whenever the model yields a value below it
            (defaults to UDENSE_PROB_FLOOR)
        node_count: Override for the number of nodes
        labels: Original node names

    Returns:
        UncertainGraph carrying the derived probabilities

    Raises:
        ValueError: If mu <= 0 or an interaction count is negative
    """
    floor = get_settings().probability_floor if floor is None else floor
    edges = [(int(u), int(v), float(t)) for u, v, t in edges]

    if isinstance(model, ExponentialCdf):
        if model.mu <= 0:
            raise ValueError(f"mu must be positive, got {model.mu}")
        if any(t < 0 for _, _, t in edges):
            raise ValueError("interaction counts must be non-negative")
        probabilities = [-math.expm1(-t / model.mu) for _, _, t in edges]
    elif isinstance(model, ReciprocalDegree):
        degree: Dict[int, int] = {}
        for u, v, _ in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        probabilities = [1.0 / max(degree[u], degree[v]) for u, v, _ in edges]
    elif isinstance(model, UniformRandom):
        rng = np.random.default_rng(model.seed)
        probabilities = list(rng.uniform(model.low, model.high, size=len(edges)))
    elif isinstance(model, NormalRandom):
        rng = np.random.default_rng(model.seed)
        probabilities = list(rng.normal(model.mean, model.std, size=len(edges)))
    else:
        raise ValueError(f"Unsupported probability model {model!r}")

    clamped = [min(1.0, max(float(p), floor)) for p in probabilities]
    low = sum(1 for p in probabilities if p < floor)
    if low:
        logger.info(f"Clamped {low} edge probabilities to floor {floor}")
    return UncertainGraph.from_edges(
        ((u, v, p) for (u, v, _), p in zip(edges, clamped)), node_count=node_count, labels=labels)


# Possible worlds


@dataclass(frozen=True, eq=False)
class World:
    """One possible world: an edge-presence bitset over the parent graph's edge order."""

    parent: UncertainGraph
    present_edges: np.ndarray

    @cached_property
    def log_prob(self) -> float:
        p = self.parent.probabilities
        present = self.present_edges
        with np.errstate(divide='ignore'):
            return float(np.sum(np.log(p[present]))) + float(np.sum(np.log1p(-p[~present])))

    @property
    def probability(self) -> float:
        return math.exp(self.log_prob)

    @property
    def node_count(self) -> int:
        return self.parent.node_count

    @cached_property
    def key(self) -> bytes:
        """Compact bitset encoding, usable as a cache key within one parent graph."""
        return np.packbits(self.present_edges).tobytes()

    def edge_list(self) -> List[Tuple[int, int]]:
        return [(u, v) for (u, v, _), present in zip(self.parent.edges, self.present_edges) if present]

    @cached_property
    def graph(self) -> nx.Graph:
        """Deterministic networkx graph on all parent nodes with the present edges."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.parent.node_count))
        graph.add_edges_from(self.edge_list())
        return graph

    def to_networkx(self) -> nx.Graph:
        return self.graph


def world_from_mask(graph: UncertainGraph, present: Sequence[bool]) -> World:
    """Build the world whose present edges are flagged in ``present``."""
    present = np.asarray(present, dtype=bool)
    if present.shape != (graph.edge_count,):
        raise ValueError(f"expected {graph.edge_count} presence flags, got {present.shape}")
    return World(graph, present)


def _round_block(graph: UncertainGraph) -> int:
    """Philox counter steps reserved per round; each step yields four uniforms."""
    return max(1, -(-graph.edge_count // 4))


def round_generator(graph: UncertainGraph, seed: int, round_index: int) -> np.random.Generator:
    """Philox keyed by the seed, positioned at the first counter block of ``round_index``."""
    bit_generator = np.random.Philox(counter=int(round_index) * _round_block(graph),
                                     key=int(seed) & _SEED_MASK)
    return np.random.Generator(bit_generator)


def sample_world(graph: UncertainGraph, seed: int, round_index: int) -> World:
    """
    Sample one possible world.

    Edge i is present iff the i-th uniform of the round's counter block is
    below p(e_i), so the outcome is a pure function of (graph, seed, round).
    """
    uniforms = round_generator(graph, seed, round_index).random(graph.edge_count)
    return World(graph, uniforms < graph.probabilities)


def sample_worlds(graph: UncertainGraph, seed: int, start: int, stop: int) -> Iterator[World]:
    """
    Sample the worlds of rounds [start, stop) from one stream.

    Round blocks are contiguous, so round r yields the same world as
    ``sample_world(graph, seed, r)`` whatever range it is drawn in.
    """
    width = 4 * _round_block(graph)
    m = graph.edge_count
    p = graph.probabilities
    generator = round_generator(graph, seed, start)
    batch = max(1, _UNIFORM_BATCH // width)
    for first in range(start, stop, batch):
        count = min(batch, stop - first)
        present = generator.random(count * width).reshape(count, width)[:, :m] < p
        for row in present:
            yield World(graph, row)


def iter_worlds(graph: UncertainGraph, max_edges: int = 20) -> Iterator[World]:
    """
    Enumerate all 2^m possible worlds.

    Raises:
        ValueError: If the graph has more than ``max_edges`` edges
    """
    m = graph.edge_count
    if m > max_edges:
        raise ValueError(f"{m} edges is too many for exhaustive world enumeration (limit {max_edges})")
    for bits in itertools.product((False, True), repeat=m):
        yield world_from_mask(graph, bits)


def induced_density(world: Union[World, nx.Graph], nodes: Iterable[int], notion) -> Fraction:
    """
    Density of the subgraph induced by ``nodes`` under a density notion.

    Args:
        world: World or deterministic networkx graph
        nodes: Non-empty node set
        notion: DensityNotion (edge, clique(h) or pattern(psi))

    Returns:
        Exact instance count divided by |nodes|

    Raises:
        ValueError: If the node set is empty
    """
    from .notions import count_instances

    nodes = NodeSet(nodes)
    if not nodes:
        raise ValueError("induced_density needs a non-empty node set")
    graph = world.to_networkx() if isinstance(world, World) else world
    return Fraction(count_instances(graph.subgraph(nodes), notion), len(nodes))


# Patterns


@dataclass(frozen=True)
class Pattern:
    """Small connected template graph with its automorphism count."""

    node_count: int
    edges: Tuple[Tuple[int, int], ...]
    name: str = 'pattern'
    automorphism_count: int = field(init=False, compare=False)

    def __post_init__(self):
        normalized = []
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"pattern self-loop on node {a}")
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise ValueError(f"pattern edge ({a}, {b}) outside [0, {self.node_count})")
            normalized.append((min(a, b), max(a, b)))
        if len(set(normalized)) != len(normalized):
            raise ValueError("pattern has duplicate edges")
        object.__setattr__(self, 'edges', tuple(sorted(normalized)))
        graph = self.to_networkx()
        if self.node_count < 2 or not nx.is_connected(graph):
            raise ValueError(f"pattern {self.name!r} must be connected with at least 2 nodes")
        matcher = nx.algorithms.isomorphism.GraphMatcher(graph, graph)
        object.__setattr__(self, 'automorphism_count', sum(1 for _ in matcher.isomorphisms_iter()))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.edges)
        return graph

    @property
    def is_clique(self) -> bool:
        return len(self.edges) == self.node_count * (self.node_count - 1) // 2


BUILTIN_PATTERNS: Dict[str, Tuple[int, Tuple[Tuple[int, int], ...]]] = {
    'edge': (2, ((0, 1),)),
    'triangle': (3, ((0, 1), (0, 2), (1, 2))),
    '2-star': (3, ((0, 1), (0, 2))),
    '3-star': (4, ((0, 1), (0, 2), (0, 3))),
    'diamond': (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))),
    '4-cycle': (4, ((0, 1), (1, 2), (2, 3), (0, 3))),
    '4-clique': (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
}


def builtin_pattern(name: str) -> Pattern:
    if name not in BUILTIN_PATTERNS:
        raise ValueError(f"Unknown pattern {name!r}; built-ins are {sorted(BUILTIN_PATTERNS)}")
    node_count, edges = BUILTIN_PATTERNS[name]
    return Pattern(node_count, edges, name)


def load_pattern(source: Union[str, Path]) -> Pattern:
    """
    Load a pattern from an "a b" edge file, or by built-in name.

    A path ending in a built-in name plus an extension that does not exist on
    disk (e.g. "diamond.txt") also resolves to the built-in.

    Raises:
        GraphFormatError: On malformed pattern files
        ValueError: On unknown names or disconnected patterns
    """
    path = Path(source)
    if not path.exists():
        name = str(source) if str(source) in BUILTIN_PATTERNS else path.stem
        return builtin_pattern(name)

    edges = []
    for line_number, tokens in _read_data_lines(path):
        if len(tokens) != 2:
            raise GraphFormatError("expected 'a b'", str(path), line_number)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError("pattern node ids must be integers", str(path), line_number)
        if a < 0 or b < 0:
            raise GraphFormatError("pattern node ids must be non-negative", str(path), line_number)
        edges.append((a, b))
    if not edges:
        raise GraphFormatError("pattern file has no edges", str(path))
    node_count = 1 + max(max(a, b) for a, b in edges)
    try:
        return Pattern(node_count, tuple(edges), path.stem)
    except ValueError as e:
        raise GraphFormatError(str(e), str(path))
