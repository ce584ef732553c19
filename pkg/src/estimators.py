"""
Monte-Carlo estimators for top-k most probable densest subgraphs (MPDS)
and top-k nucleus densest subgraphs (NDS), with their accuracy bounds.

Rounds are independent: round r samples its world from the (seed, r)
stream, so any split of the rounds across workers yields the same counts.
"""

import logging
import math
import time
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .densest import maximal_densest_or_none, enumerate_all_densest, heuristic_pattern_dense
from .errors import EnumerationCapError
from .graph_core import NodeSet, UncertainGraph, sample_worlds
from .itemsets import TransactionDb, mine_topk_closed
from .notions import DensityNotion
from .oracle import exact_sweep
from .parallel import chunk_ranges, map_chunks

logger = logging.getLogger(__name__)


@dataclass
class CandidatePool:
    """Node sets harvested across rounds with their occurrence counts."""

    counts: Counter = field(default_factory=Counter)
    rounds: int = 0
    degenerate_rounds: int = 0
    densest_counts: List[int] = field(default_factory=list)

    def merge(self, other: 'CandidatePool'):
        self.counts.update(other.counts)
        self.rounds += other.rounds
        self.degenerate_rounds += other.degenerate_rounds
        self.densest_counts.extend(other.densest_counts)

    def estimate(self, nodes: Iterable[int]) -> float:
        """τ̂ of a node set: its count over all rounds, degenerate ones included."""
        return self.counts.get(NodeSet(nodes), 0) / self.rounds if self.rounds else 0.0

    def ranked(self, k: int) -> List[Tuple[NodeSet, int]]:
        return sorted(self.counts.items(), key=lambda item: (-item[1], tuple(item[0])))[:k]

    def count_stats(self) -> Dict[str, float]:
        """Distribution of the number of densest subgraphs per non-degenerate round."""
        if not self.densest_counts:
            return {}
        counts = np.asarray(self.densest_counts, dtype=float)
        q1, median, q3 = np.percentile(counts, [25, 50, 75])
        return {
            'densest_per_world_mean': float(counts.mean()),
            'densest_per_world_std': float(counts.std()),
            'densest_per_world_q1': float(q1),
            'densest_per_world_median': float(median),
            'densest_per_world_q3': float(q3),
            'densest_per_world_max': float(counts.max()),
            'degenerate_rounds': float(self.degenerate_rounds),
        }


@dataclass
class EstimateResult:
    """Ranked node sets with their estimated probabilities."""

    mode: str
    ranked: List[Tuple[NodeSet, float]]
    notion: DensityNotion
    theta: int
    seed: int
    k: int
    l_m: Optional[int] = None
    warnings: List[str] = field(default_factory=list)
    stats: Dict[str, float] = field(default_factory=dict)

    @property
    def sets(self) -> List[NodeSet]:
        return [nodes for nodes, _ in self.ranked]


@dataclass(frozen=True)
class _HarvestTask:
    graph: UncertainGraph
    notion: DensityNotion
    seed: int
    start: int
    stop: int
    mode: str
    heuristic: bool
    max_densest: int
    cache_size: int


def _solve_round(world, task: _HarvestTask):
    """Per-world outcome: tuple of densest sets (mpds) or the maximal set (nds); None if degenerate."""
    if task.heuristic:
        found = heuristic_pattern_dense(world, task.notion.pattern)
        if not found:
            return None
        return tuple(found) if task.mode == 'mpds' else found[0]
    if task.mode == 'mpds':
        result = enumerate_all_densest(world, task.notion, task.max_densest)
        return None if result.degenerate else result.all_densest
    return maximal_densest_or_none(world.to_networkx(), task.notion)


def _harvest(task: _HarvestTask) -> Tuple[CandidatePool, TransactionDb]:
    """Run rounds [start, stop) and collect their outcomes; identical worlds are solved once."""
    cache: 'OrderedDict[bytes, object]' = OrderedDict()
    pool = CandidatePool()
    db = TransactionDb()
    worlds = sample_worlds(task.graph, task.seed, task.start, task.stop)
    for round_index, world in enumerate(worlds, start=task.start):
        key = world.key
        if key in cache:
            outcome = cache[key]
            cache.move_to_end(key)
        else:
            try:
                outcome = _solve_round(world, task)
            except EnumerationCapError as e:
                raise e.at_round(round_index)
            if task.cache_size:
                cache[key] = outcome
                if len(cache) > task.cache_size:
                    cache.popitem(last=False)
        pool.rounds += 1
        if outcome is None:
            pool.degenerate_rounds += 1
            continue
        if task.mode == 'mpds':
            pool.counts.update(outcome)
            pool.densest_counts.append(len(outcome))
        else:
            db.add(outcome)
    return pool, db


def _run_rounds(graph: UncertainGraph, notion: DensityNotion, theta: int, seed: int, mode: str,
                workers: Optional[int], heuristic: bool,
                max_densest: Optional[int]) -> Tuple[CandidatePool, TransactionDb]:
    settings = get_settings()
    if theta < 1:
        raise ValueError(f"theta must be at least 1, got {theta}")
    if heuristic and notion.kind != 'pattern':
        raise ValueError("heuristic mode applies to pattern density only")
    workers = settings.threads if workers is None else workers
    tasks = [_HarvestTask(graph, notion, seed, start, stop, mode, heuristic,
                          settings.max_densest if max_densest is None else max_densest,
                          settings.world_cache_size)
             for start, stop in chunk_ranges(theta, workers)]

    started = time.perf_counter()
    pool, db = CandidatePool(), TransactionDb()
    for part_pool, part_db in map_chunks(_harvest, tasks, workers):
        pool.merge(part_pool)
        db.merge(part_db)
    logger.info(f"✓ {theta} rounds ({mode}, {notion.label}) in {time.perf_counter() - started:.2f}s, "
                f"{pool.degenerate_rounds} degenerate")
    return pool, db


def _short_warning(found: int, k: int, what: str) -> List[str]:
    if found >= k:
        return []
    message = f"only {found} distinct {what} found, fewer than k={k}"
    logger.warning(message)
    return [message]


def estimate_topk_mpds(graph: UncertainGraph, notion: DensityNotion, k: int, theta: int, seed: int,
                       workers: Optional[int] = None, heuristic: bool = False,
                       max_densest: Optional[int] = None) -> EstimateResult:
    """
    Top-k most probable densest subgraphs by sampling.

    Args:
        graph: Uncertain graph
        notion: Density notion
        k: Number of sets to return
        theta: Number of sampled worlds
        seed: Seed of the per-round random streams
        workers: Worker processes (defaults to UDENSE_THREADS)
        heuristic: Harvest heuristic_pattern_dense sets instead of exact ones (pattern notion only)
        max_densest: Per-world enumeration cap

    Returns:
        EstimateResult ranked by τ̂ descending, ties broken lexicographically

    Raises:
        ValueError: If k < 1 or theta < 1
        EnumerationCapError: If a world exceeds the cap (round_index set)
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    pool, _ = _run_rounds(graph, notion, theta, seed, 'mpds', workers, heuristic, max_densest)
    ranked = [(nodes, count / theta) for nodes, count in pool.ranked(k)]
    warnings = _short_warning(len(ranked), k, 'densest subgraphs')
    return EstimateResult('mpds', ranked, notion, theta, seed, k,
                          warnings=warnings, stats=pool.count_stats())


def estimate_topk_nds(graph: UncertainGraph, notion: DensityNotion, k: int, l_m: int, theta: int,
                      seed: int, workers: Optional[int] = None, heuristic: bool = False,
                      miner_cap: Optional[int] = None) -> EstimateResult:
    """
    Top-k nucleus densest subgraphs by sampling.

    Each round contributes its maximal densest subgraph as one transaction;
    the result is the top-k closed node sets of size >= l_m ranked by γ̂.

    Raises:
        ValueError: If k, l_m or theta is below 1
        MiningCapError: If the closed-set search exceeds its cap
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if l_m < 1:
        raise ValueError(f"l_m must be at least 1, got {l_m}")
    pool, db = _run_rounds(graph, notion, theta, seed, 'nds', workers, heuristic, None)
    mined = mine_topk_closed(db, k, l_m, miner_cap)
    ranked = [(nodes, support / theta) for nodes, support in mined]
    warnings = _short_warning(len(ranked), k, f"closed sets of size >= {l_m}")
    stats = {'degenerate_rounds': float(pool.degenerate_rounds),
             'distinct_transactions': float(len(db.distinct))}
    return EstimateResult('nds', ranked, notion, theta, seed, k, l_m, warnings, stats)


# Accuracy bounds


def mpds_inclusion_bound(true_taus: Sequence[float], theta: int) -> float:
    """Lower bound on the probability that every true top-k set is sampled at least once."""
    return max(0.0, 1.0 - sum((1.0 - tau) ** theta for tau in true_taus))


def _separation_factor(top: Sequence[float], others: Sequence[float], mid: float, theta: int) -> float:
    """1 - Σ exp(-2 d² θ), d being each value's margin on the correct side of ``mid``."""
    total = sum(math.exp(-2 * (value - mid) ** 2 * theta) for value in top)
    total += sum(math.exp(-2 * (mid - value) ** 2 * theta) for value in others)
    return 1.0 - total


def mpds_return_bound(true_taus: Sequence[float], candidate_taus: Sequence[float], theta: int) -> float:
    """
    Lower bound on the probability that exactly the true top-k sets are returned.

    Args:
        true_taus: τ of the true top-(k+1) sets, descending
        candidate_taus: τ of the candidate sets outside the true top-k
            (the top-k sets always count as candidates)
        theta: Number of rounds

    Returns:
        Inclusion bound times the separation factor, floored at 0
    """
    if len(true_taus) < 2:
        raise ValueError("mpds_return_bound needs the top-(k+1) probabilities")
    top = list(true_taus[:-1])
    mid = (true_taus[-2] + true_taus[-1]) / 2
    separation = _separation_factor(top, candidate_taus, mid, theta)
    return max(0.0, mpds_inclusion_bound(top, theta) * separation)


def nds_bounds(graph: UncertainGraph, notion: DensityNotion, k: int, l_m: int,
               theta: int) -> Tuple[float, float]:
    """
    Closure and return bounds for the NDS estimator, from exact oracle quantities.

    Returns:
        (closure_bound, return_bound), each floored at 0

    Raises:
        GraphTooLargeError: If the graph exceeds the oracle's limits
    """
    sweep = exact_sweep(graph, notion)
    closed = sweep.closed_sets(l_m)
    if not closed:
        return 0.0, 0.0
    top = closed[:k]
    closure_bound = max(0.0, 1.0 - sweep.containing_world_sum([nodes.to_mask() for nodes, _ in top], theta))
    top_gammas = [gamma for _, gamma in top]
    other_gammas = [gamma for _, gamma in closed[k:]]
    mid = (top_gammas[-1] + other_gammas[0]) / 2 if other_gammas else top_gammas[-1] / 2
    separation = _separation_factor(top_gammas, other_gammas, mid, theta)
    return closure_bound, max(0.0, closure_bound * separation)


def hoeffding_radius(theta: int, delta: float) -> float:
    """Half-width ε with Pr(|τ̂ - τ| > ε) <= δ after θ rounds."""
    if theta < 1 or not 0 < delta < 1:
        raise ValueError("hoeffding_radius needs theta >= 1 and delta in (0, 1)")
    return math.sqrt(math.log(2 / delta) / (2 * theta))


def hoeffding_sample_size(epsilon: float, delta: float) -> int:
    """Smallest θ whose Hoeffding radius at confidence 1 - δ is at most ε."""
    if epsilon <= 0 or not 0 < delta < 1:
        raise ValueError("hoeffding_sample_size needs epsilon > 0 and delta in (0, 1)")
    return math.ceil(math.log(2 / delta) / (2 * epsilon ** 2))


# Convergence ladder


def jaccard(first: Iterable[Iterable[int]], second: Iterable[Iterable[int]]) -> float:
    """Jaccard similarity of two collections of node sets (1.0 when both are empty)."""
    a = {NodeSet(s) for s in first}
    b = {NodeSet(s) for s in second}
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def auto_theta(run: Callable[[int], EstimateResult], base: int = 10,
               rungs: int = 9) -> Tuple[EstimateResult, List[Dict[str, float]]]:
    """
    Double θ from ``base`` until the top-k sets stop changing.

    Args:
        run: Estimator call for a given θ
        base: First θ
        rungs: Maximum number of θ values (base * 2^0 ... base * 2^(rungs-1))

    Returns:
        (last result, one row per rung with theta, runtime and jaccard to the previous rung)
    """
    rows: List[Dict[str, float]] = []
    previous: Optional[EstimateResult] = None
    result: Optional[EstimateResult] = None
    for rung in range(rungs):
        theta = base * 2 ** rung
        started = time.perf_counter()
        result = run(theta)
        elapsed = time.perf_counter() - started
        similarity = jaccard(previous.sets, result.sets) if previous is not None else float('nan')
        rows.append({'theta': theta, 'runtime': elapsed, 'jaccard': similarity})
        logger.info(f"theta={theta}: jaccard={similarity:.3f} ({elapsed:.2f}s)")
        if previous is not None and similarity == 1.0:
            break
        previous = result
    return result, rows
