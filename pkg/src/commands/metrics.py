"""
metrics subcommand: quality measures of one node set, optionally with purity
and the rank F1 of a saved mpds/nds result against the exact ranking.
"""

import argparse
import logging
from pathlib import Path
from typing import List, Optional

from . import add_graph_arguments, load_inputs
from ..config import Settings
from ..graph_core import NodeSet, UncertainGraph
from ..metrics import (expected_density, load_labels, probabilistic_clustering_coefficient,
                       probabilistic_density, purity, rank_f1)
from ..notions import DensityNotion
from ..oracle import exact_topk, exact_topk_nds
from ..result_formatter import ResultFormatter
from ..schemas import EstimateDocument, MetricsDocument
from ..utils import parse_node_set

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('metrics', help="PD, PCC, purity and rank F1")
    add_graph_arguments(parser)
    parser.add_argument('--set', required=True, help="Comma-separated node set")
    parser.add_argument('--labels', help="'node community-id' file for purity")
    parser.add_argument('--compare', help="Saved mpds/nds JSON result scored against the exact top-k")
    parser.set_defaults(handler=handle)


def compare_to_exact(graph: UncertainGraph, notion: DensityNotion, document: EstimateDocument,
                     warnings: List[str]) -> Optional[float]:
    """Rank F1 of a saved result against the oracle's ranking of the same mode and k."""
    if document.mode == 'nds':
        exact = exact_topk_nds(graph, notion, document.k, document.l_m or 2)
    else:
        exact = exact_topk(graph, notion, document.k)
    ours = [row.nodes for row in document.results]
    length = min(len(ours), len(exact))
    if length != len(ours) or length != len(exact):
        message = f"rankings truncated to {length} sets (ours {len(ours)}, exact {len(exact)})"
        logger.warning(message)
        warnings.append(message)
    if length == 0:
        return None
    return rank_f1(ours[:length], [nodes for nodes, _ in exact[:length]])


def handle(args: argparse.Namespace, settings: Settings):
    graph, notion = load_inputs(args)
    nodes: NodeSet = parse_node_set(args.set, graph)
    warnings: List[str] = []

    pd_value = None
    if len(nodes) >= 2:
        pd_value = probabilistic_density(graph, nodes)
    else:
        warnings.append("probabilistic density needs at least two nodes")

    purity_value = None
    if args.labels is not None:
        purity_value = purity(nodes, load_labels(args.labels, graph))

    f1_value = None
    if args.compare is not None:
        saved = ResultFormatter.from_json(Path(args.compare).read_text(encoding='utf-8'), EstimateDocument)
        f1_value = compare_to_exact(graph, notion, saved, warnings)

    document = MetricsDocument(
        notion=notion.label,
        nodes=list(nodes),
        expected_density=expected_density(graph, nodes, notion),
        probabilistic_density=pd_value,
        clustering_coefficient=probabilistic_clustering_coefficient(graph, nodes),
        purity=purity_value,
        rank_f1=f1_value,
        warnings=warnings,
    )
    ResultFormatter.emit(ResultFormatter.to_json(document), args.out)
