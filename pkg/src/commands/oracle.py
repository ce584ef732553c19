"""
oracle subcommand: exact τ / γ of a node set, exact top-k, and the matching identity check.
"""

import argparse
import logging

import networkx as nx

from . import add_graph_arguments, load_inputs, ranked_sets
from ..config import Settings
from ..oracle import exact_gamma, exact_tau, exact_topk, exact_topk_nds, matching_identity_check
from ..result_formatter import ResultFormatter
from ..schemas import MatchingCheck, OracleDocument
from ..utils import parse_node_set, positive_int

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('oracle', help="Exhaustive possible-world oracle (small graphs)")
    add_graph_arguments(parser, required=False)
    parser.add_argument('--set', help="Comma-separated node set whose tau and gamma are reported")
    parser.add_argument('--k', type=positive_int, default=None, help="Report the exact top-k")
    parser.add_argument('--nds', action='store_true', help="Rank closed sets by gamma instead of tau")
    parser.add_argument('--l-m', type=positive_int, default=2, help="Minimum set size with --nds")
    parser.add_argument('--matching', help="Deterministic 'u v' edge file for the matching identity check")
    parser.set_defaults(handler=handle)


def _matching(path: str) -> MatchingCheck:
    det_graph = nx.read_edgelist(path, comments='#', nodetype=str, data=False)
    lhs, rhs = matching_identity_check(det_graph)
    logger.info(f"✓ matching identity holds: {lhs} = {rhs}")
    return MatchingCheck(lhs=lhs, rhs=rhs, edges=det_graph.number_of_edges(), nodes=det_graph.number_of_nodes())


def handle(args: argparse.Namespace, settings: Settings):
    if args.graph is None and args.matching is None:
        raise ValueError("oracle needs --graph or --matching")

    document = OracleDocument()
    if args.matching is not None:
        document.matching = _matching(args.matching)

    if args.graph is not None:
        graph, notion = load_inputs(args)
        document.notion = notion.label
        if args.set is not None:
            nodes = parse_node_set(args.set, graph)
            document.nodes = list(nodes)
            document.tau = exact_tau(graph, nodes, notion)
            document.gamma = exact_gamma(graph, nodes, notion)
        if args.k is not None or args.set is None:
            k = args.k or 1
            document.k = k
            if args.nds:
                document.mode = 'nds'
                document.l_m = args.l_m
                ranked = exact_topk_nds(graph, notion, k, args.l_m)
            else:
                document.mode = 'mpds'
                ranked = exact_topk(graph, notion, k)
            if len(ranked) < k:
                message = f"only {len(ranked)} sets have non-zero probability, fewer than k={k}"
                logger.warning(message)
                document.warnings.append(message)
            document.results = ranked_sets(graph, ranked)

    ResultFormatter.emit(ResultFormatter.to_json(document), args.out)
