"""
nds subcommand: top-k nucleus densest subgraphs by sampling plus closed-set mining.
"""

import argparse
import logging
from typing import Dict, List

from . import add_graph_arguments, add_sampling_arguments, load_inputs, ranked_sets, worker_count
from .mpds import BOUND_DELTA, run_ladder
from ..config import Settings
from ..errors import GraphTooLargeError
from ..estimators import EstimateResult, estimate_topk_nds, hoeffding_radius, nds_bounds
from ..graph_core import UncertainGraph
from ..notions import DensityNotion
from ..result_formatter import ResultFormatter
from ..schemas import EstimateDocument
from ..utils import positive_int

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('nds', help="Top-k nucleus densest subgraphs")
    add_graph_arguments(parser)
    add_sampling_arguments(parser)
    parser.add_argument('--l-m', type=positive_int, default=2, help="Minimum size of a reported set")
    parser.set_defaults(handler=handle)


def _bounds(graph: UncertainGraph, notion: DensityNotion, k: int, l_m: int, theta: int,
            warnings: List[str]) -> Dict[str, float]:
    bounds = {'hoeffding_radius': hoeffding_radius(theta, BOUND_DELTA)}
    try:
        closure, returned = nds_bounds(graph, notion, k, l_m, theta)
    except GraphTooLargeError as e:
        message = f"bounds limited to the Hoeffding radius: {e}"
        logger.warning(message)
        warnings.append(message)
        return bounds
    bounds['closure'] = closure
    bounds['return'] = returned
    return bounds


def handle(args: argparse.Namespace, settings: Settings):
    graph, notion = load_inputs(args)
    workers = worker_count(args, settings)

    def run(theta: int) -> EstimateResult:
        return estimate_topk_nds(graph, notion, args.k, args.l_m, theta, args.seed, workers=workers,
                                 heuristic=args.heuristic)

    result, convergence = run_ladder(args, run)
    warnings = list(result.warnings)
    bounds = _bounds(graph, notion, args.k, args.l_m, result.theta, warnings) if args.bounds else None
    document = EstimateDocument(
        mode='nds',
        notion=notion.label,
        k=args.k,
        theta=result.theta,
        seed=args.seed,
        l_m=args.l_m,
        results=ranked_sets(graph, result.ranked),
        bounds=bounds,
        warnings=warnings,
        stats=result.stats or None,
        convergence=convergence,
    )
    ResultFormatter.emit(ResultFormatter.to_json(document), args.out)
    logger.info(f"✓ nds: {len(result.ranked)} sets at theta={result.theta}")
