"""
Subcommands of the udense command line.

Each module exposes register(subparsers) and handle(args, settings):
- mpds: top-k most probable densest subgraphs
- nds: top-k nucleus densest subgraphs
- oracle: exhaustive τ / γ / top-k and the matching identity check
- eds: expected densest subgraph baseline
- metrics: PD, PCC, purity and rank F1 of a node set
- bench: θ-doubling convergence ladder as TSV
"""

import argparse
from typing import List, Optional, Tuple

from ..config import Settings
from ..graph_core import NodeSet, UncertainGraph
from ..notions import DensityNotion, parse_density
from ..schemas import RankedSet
from ..utils import load_graph, node_names, positive_int


def add_graph_arguments(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument('--graph', required=required, help="Edge list 'u v p' (or 'u v t' with --prob-model)")
    parser.add_argument('--density', default='edge',
                        help="edge | clique:<h> | pattern:<file or built-in name> (default: edge)")
    parser.add_argument('--prob-model', default='file',
                        help="file | exp:<mu> | reciprocal | uniform[:seed] | normal:<mean>[:<std>[:seed]]")
    parser.add_argument('--out', help="Write the result here instead of stdout")


def add_sampling_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--k', type=positive_int, default=1, help="Number of sets to report")
    parser.add_argument('--theta', type=positive_int, default=1000, help="Number of sampled worlds")
    parser.add_argument('--auto-theta', action='store_true',
                        help="Double theta from 10 until the top-k sets stop changing")
    parser.add_argument('--seed', type=int, default=0, help="Seed of the per-round random streams")
    parser.add_argument('--threads', type=positive_int, default=None, help="Worker processes")
    parser.add_argument('--heuristic', action='store_true',
                        help="Use the (k_max, psi)-core heuristic (pattern density only)")
    parser.add_argument('--bounds', action='store_true',
                        help="Report accuracy bounds (exact quantities from the oracle)")


def load_inputs(args: argparse.Namespace) -> Tuple[UncertainGraph, DensityNotion]:
    """Graph and density notion named by the common arguments."""
    notion = parse_density(args.density)
    return load_graph(args.graph, args.prob_model), notion


def worker_count(args: argparse.Namespace, settings: Settings) -> int:
    threads = getattr(args, 'threads', None)
    return settings.threads if threads is None else threads


def ranked_sets(graph: UncertainGraph, ranked: List[Tuple[NodeSet, float]]) -> List[RankedSet]:
    """Result rows, carrying the original node names when they differ from the ids."""
    rows = []
    for nodes, estimate in ranked:
        names = node_names(graph, nodes)
        renamed = names != [str(v) for v in nodes]
        rows.append(RankedSet(nodes=list(nodes), estimate=estimate, labels=names if renamed else None))
    return rows


def optional_float(value: float) -> Optional[float]:
    return None if value != value else value
