"""
mpds subcommand: top-k most probable densest subgraphs by sampling.
"""

import argparse
import logging
from typing import Dict, List, Optional, Tuple

from . import (add_graph_arguments, add_sampling_arguments, load_inputs, optional_float,
               ranked_sets, worker_count)
from ..config import Settings
from ..errors import GraphTooLargeError
from ..estimators import (EstimateResult, auto_theta, estimate_topk_mpds, hoeffding_radius,
                          mpds_inclusion_bound, mpds_return_bound)
from ..graph_core import UncertainGraph
from ..notions import DensityNotion
from ..oracle import exact_sweep
from ..result_formatter import ResultFormatter
from ..schemas import EstimateDocument, ThetaRung

logger = logging.getLogger(__name__)

BOUND_DELTA = 0.05


def register(subparsers):
    parser = subparsers.add_parser('mpds', help="Top-k most probable densest subgraphs")
    add_graph_arguments(parser)
    add_sampling_arguments(parser)
    parser.set_defaults(handler=handle)


def run_ladder(args: argparse.Namespace, run) -> Tuple[EstimateResult, Optional[List[ThetaRung]]]:
    """Single run at --theta, or the doubling ladder with --auto-theta."""
    if not args.auto_theta:
        return run(args.theta), None
    result, rows = auto_theta(run)
    return result, [ThetaRung(theta=row['theta'], jaccard=optional_float(row['jaccard'])) for row in rows]


def mpds_bounds(graph: UncertainGraph, notion: DensityNotion, k: int, theta: int,
                warnings: List[str]) -> Dict[str, float]:
    """Inclusion and return bounds from exact τ values, when the oracle can handle the graph."""
    bounds = {'hoeffding_radius': hoeffding_radius(theta, BOUND_DELTA)}
    try:
        ranked = exact_sweep(graph, notion).ranked_tau(2 ** graph.node_count)
    except GraphTooLargeError as e:
        message = f"bounds limited to the Hoeffding radius: {e}"
        logger.warning(message)
        warnings.append(message)
        return bounds
    taus = [tau for _, tau in ranked]
    top = taus[:k + 1] + [0.0] * max(0, k + 1 - len(taus))
    bounds['inclusion'] = mpds_inclusion_bound(top[:k], theta)
    bounds['return'] = mpds_return_bound(top, taus[k:], theta)
    return bounds


def handle(args: argparse.Namespace, settings: Settings):
    graph, notion = load_inputs(args)
    workers = worker_count(args, settings)

    def run(theta: int) -> EstimateResult:
        return estimate_topk_mpds(graph, notion, args.k, theta, args.seed, workers=workers,
                                  heuristic=args.heuristic)

    result, convergence = run_ladder(args, run)
    warnings = list(result.warnings)
    bounds = mpds_bounds(graph, notion, args.k, result.theta, warnings) if args.bounds else None
    document = EstimateDocument(
        mode='mpds',
        notion=notion.label,
        k=args.k,
        theta=result.theta,
        seed=args.seed,
        results=ranked_sets(graph, result.ranked),
        bounds=bounds,
        warnings=warnings,
        stats=result.stats or None,
        convergence=convergence,
    )
    ResultFormatter.emit(ResultFormatter.to_json(document), args.out)
    logger.info(f"✓ mpds: {len(result.ranked)} sets at theta={result.theta}")
