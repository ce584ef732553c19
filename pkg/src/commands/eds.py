"""
eds subcommand: expected densest subgraph next to the skeleton's densest subgraph.
"""

import argparse
import logging
from typing import List, Optional

from . import add_graph_arguments, load_inputs
from ..config import Settings
from ..errors import GraphTooLargeError
from ..graph_core import NodeSet, UncertainGraph
from ..metrics import deterministic_densest_subgraph, expected_densest_subgraph, expected_density
from ..notions import DensityNotion
from ..oracle import exact_tau
from ..result_formatter import ResultFormatter
from ..schemas import BaselineSet, EdsDocument

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('eds', help="Expected densest subgraph baseline")
    add_graph_arguments(parser)
    parser.add_argument('--dump-dimacs', help="Write the final flow network in DIMACS max-flow format")
    parser.set_defaults(handler=handle)


def _exact_tau_or_none(graph: UncertainGraph, nodes: NodeSet, notion: DensityNotion,
                       warnings: List[str]) -> Optional[float]:
    if not nodes:
        return None
    try:
        return exact_tau(graph, nodes, notion)
    except GraphTooLargeError as e:
        message = f"tau not reported: {e}"
        if message not in warnings:
            logger.warning(message)
            warnings.append(message)
        return None


def handle(args: argparse.Namespace, settings: Settings):
    graph, notion = load_inputs(args)
    warnings: List[str] = []

    eds_nodes, eds_value = expected_densest_subgraph(graph, notion, settings.weight_quantum, args.dump_dimacs)
    if not eds_nodes:
        warnings.append("no instance survives weight quantization; expected densest subgraph is empty")
    dds_nodes = deterministic_densest_subgraph(graph, notion)
    dds_value = expected_density(graph, dds_nodes, notion) if dds_nodes else 0.0

    document = EdsDocument(
        notion=notion.label,
        eds=BaselineSet(nodes=list(eds_nodes), expected_density=eds_value,
                        tau=_exact_tau_or_none(graph, eds_nodes, notion, warnings)),
        dds=BaselineSet(nodes=list(dds_nodes), expected_density=dds_value,
                        tau=_exact_tau_or_none(graph, dds_nodes, notion, warnings)),
        warnings=warnings,
    )
    ResultFormatter.emit(ResultFormatter.to_json(document), args.out)
    logger.info(f"✓ eds: {len(eds_nodes)} nodes, expected density {eds_value:.6f}")
