"""
bench subcommand: θ-doubling convergence ladder on a graph file or a seeded
synthetic ER / BA graph, one TSV row per rung (theta, runtime, jaccard, f1).
"""

import argparse
import logging
from typing import Dict, List, Optional, Tuple

from . import add_graph_arguments, worker_count
from ..config import Settings
from ..errors import GraphTooLargeError
from ..estimators import EstimateResult, auto_theta, estimate_topk_mpds, estimate_topk_nds
from ..graph_core import NodeSet
from ..metrics import rank_f1
from ..notions import parse_density
from ..oracle import exact_topk, exact_topk_nds
from ..result_formatter import ResultFormatter
from ..utils import load_graph, positive_int, synthetic_graph

logger = logging.getLogger(__name__)

COLUMNS = ['theta', 'runtime', 'jaccard', 'f1']


def register(subparsers):
    parser = subparsers.add_parser('bench', help="Convergence ladder as TSV")
    add_graph_arguments(parser, required=False)
    parser.add_argument('--synthetic', help="er:<n>:<m> or ba:<n>:<m_attach> instead of --graph")
    parser.add_argument('--mode', choices=('mpds', 'nds'), default='mpds')
    parser.add_argument('--k', type=positive_int, default=1)
    parser.add_argument('--l-m', type=positive_int, default=2)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--threads', type=positive_int, default=None)
    parser.add_argument('--base-theta', type=positive_int, default=10)
    parser.add_argument('--rungs', type=positive_int, default=9)
    parser.set_defaults(handler=handle)


def _f1(result: EstimateResult, exact: Optional[List[NodeSet]]) -> float:
    if not exact:
        return float('nan')
    length = min(len(result.sets), len(exact))
    if length == 0:
        return 0.0
    return rank_f1(result.sets[:length], exact[:length])


def handle(args: argparse.Namespace, settings: Settings):
    if (args.graph is None) == (args.synthetic is None):
        raise ValueError("bench needs exactly one of --graph and --synthetic")
    graph = load_graph(args.graph, args.prob_model) if args.graph else synthetic_graph(args.synthetic, args.seed)
    notion = parse_density(args.density)
    workers = worker_count(args, settings)

    results: Dict[int, EstimateResult] = {}

    def run(theta: int) -> EstimateResult:
        if args.mode == 'nds':
            result = estimate_topk_nds(graph, notion, args.k, args.l_m, theta, args.seed, workers=workers)
        else:
            result = estimate_topk_mpds(graph, notion, args.k, theta, args.seed, workers=workers)
        results[theta] = result
        return result

    _, ladder = auto_theta(run, base=args.base_theta, rungs=args.rungs)

    exact: Optional[List[NodeSet]] = None
    try:
        ranked: List[Tuple[NodeSet, float]] = (exact_topk_nds(graph, notion, args.k, args.l_m)
                                               if args.mode == 'nds' else exact_topk(graph, notion, args.k))
        exact = [nodes for nodes, _ in ranked]
    except GraphTooLargeError as e:
        logger.warning(f"f1 column left empty: {e}")

    rows = [dict(row, f1=_f1(results[row['theta']], exact)) for row in ladder]
    ResultFormatter.emit(ResultFormatter.to_tsv(rows, COLUMNS), args.out)
    logger.info(f"✓ bench: {len(rows)} rungs, final theta={rows[-1]['theta']}")
